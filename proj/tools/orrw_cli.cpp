#include "orrw/cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = orrw::cli::parse_args(argc, argv);
  if (!parsed.config) return parsed.exit_code;
  return orrw::cli::run(*parsed.config);
}
