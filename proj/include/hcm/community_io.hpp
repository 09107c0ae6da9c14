#pragma once

#include <iosfwd>
#include <string>

#include "hcm/community.hpp"

namespace hcm {

// Text format: line 1 "s d_total", line 2 the s out-degrees, then one "u v" line
// per internal edge (0-based). Lines starting with '#' are comments; a
// "# weight <x>" comment carries the optional size-override attribute.
Community parse_community_text(std::istream& in);
Community parse_community_string(const std::string& text);
Community load_community_file(const std::string& path);
void serialize_community_text(const Community& c, std::ostream& out);
std::string community_to_string(const Community& c);
void save_community_file(const Community& c, const std::string& path);

// Distribution config (JSON): {"entries": [{"community": <spec>, "weight": <w>,
// "count": <optional int>}]}. A community <spec> is a file path string, an inline
// object {"size","out_degrees","edges","size_weight"}, or a builtin
// {"family": "star"|"line"|"household"|"single_vertex", "param": k}. Weights are
// numbers or exact-rational strings like "1/2".
CommunityDistribution parse_distribution_json_text(const std::string& json_text,
                                                   const std::string& base_dir);
CommunityDistribution load_distribution_file(const std::string& path);

// Built-in named catalogs used by the paper's worked examples:
//   "table1"  star(5)
//   "table2"  half line(5), half single_vertex(3)
CommunityDistribution named_catalog(const std::string& name);

}  // namespace hcm
