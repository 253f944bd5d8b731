#pragma once

// Small named graphs with closed-form answers.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orrw/graph.hpp"

namespace orrw::fixtures {

using EdgeList = std::vector<std::pair<std::string, std::string>>;

inline FiniteGraph star3() { return build_graph(EdgeList{{"0", "1"}, {"0", "2"}}, "0"); }
inline FiniteGraph path3() { return build_graph(EdgeList{{"0", "1"}, {"1", "2"}}, "0"); }
/// Path 0 – 1 – 2 – 3 started at `start`.
inline FiniteGraph path4(std::string_view start = "0") {
  return build_graph(EdgeList{{"0", "1"}, {"1", "2"}, {"2", "3"}}, start);
}
inline FiniteGraph triangle() { return build_graph(EdgeList{{"1", "2"}, {"2", "3"}, {"3", "1"}}, "1"); }

inline FiniteGraph star4() { return build_graph(EdgeList{{"0", "1"}, {"0", "2"}, {"0", "3"}}, "0"); }
inline FiniteGraph path5() { return build_graph(EdgeList{{"0", "1"}, {"1", "2"}, {"2", "3"}, {"3", "4"}}, "0"); }
inline FiniteGraph cycle4() { return build_graph(EdgeList{{"0", "1"}, {"1", "2"}, {"2", "3"}, {"3", "0"}}, "0"); }
/// Triangle 0 1 2 with the pendant edge 2 – 3.
inline FiniteGraph paw() { return build_graph(EdgeList{{"0", "1"}, {"1", "2"}, {"2", "0"}, {"2", "3"}}, "0"); }
inline FiniteGraph k4() {
  return build_graph(EdgeList{{"0", "1"}, {"0", "2"}, {"0", "3"}, {"1", "2"}, {"1", "3"}, {"2", "3"}}, "0");
}

/// Tags with a closed-form critical exponent.
inline const std::vector<std::string>& closed_form_tags() {
  static const std::vector<std::string> tags{"star3", "path3", "path4", "triangle"};
  return tags;
}

/// Every built-in graph (all have at most 6 edges).
inline const std::vector<std::string>& all_tags() {
  static const std::vector<std::string> tags{"star3", "path3", "path4", "triangle", "star4", "path5", "cycle4", "paw", "k4"};
  return tags;
}

/// Fixture by tag.
inline FiniteGraph by_tag(std::string_view tag) {
  if (tag == "star3") return star3();
  if (tag == "path3") return path3();
  if (tag == "path4") return path4();
  if (tag == "triangle") return triangle();
  if (tag == "star4") return star4();
  if (tag == "path5") return path5();
  if (tag == "cycle4") return cycle4();
  if (tag == "paw") return paw();
  if (tag == "k4") return k4();
  throw GraphError("unknown fixture '" + std::string(tag) + "'");
}

}  // namespace orrw::fixtures
