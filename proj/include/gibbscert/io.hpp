#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gibbscert/disorder.hpp"
#include "gibbscert/gibbs.hpp"
#include "gibbscert/graph.hpp"
#include "gibbscert/temperedness.hpp"
#include "gibbscert/uniqueness.hpp"

namespace gibbscert {

using Json = nlohmann::ordered_json;

/// "# graph vertices=N edges=M" followed by one sorted "u v" line per edge.
std::string write_edge_list(const Graph& g);
/// Accepts the format above; blank lines and other '#' lines are skipped.
/// A header fixes the vertex count (isolated trailing vertices survive).
Graph parse_edge_list(std::string_view text);

/// {"vertices": N, "edges": [[u, v], ...]}; "vertices" is optional.
Graph graph_from_json(const Json& j);
Json graph_to_json(const Graph& g);

/// Reads a .json graph or an edge list, chosen by file extension.
Graph read_graph_file(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical edge-list text, as 16 hex digits.
std::string graph_hash(const Graph& g);

/// {"family": "exponential", "rate": 8} and the other families.
Json distribution_to_json(const NormDistribution& d);
NormDistribution distribution_from_json(const Json& j);
/// "exponential:8", "uniform:2", "half_normal:1", "constant:1".
NormDistribution parse_distribution(std::string_view text);

/// {"distribution", "sign_mode", "seed", "edges": [{"u", "v", "norm", "sign"}]}
/// with edges in Graph::edges() order.
Json disorder_to_json(const DisorderSample& w, const Graph& g);
/// Replays an exported sample; edge endpoints must match g.
DisorderSample disorder_from_json(const Json& j, const Graph& g);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal form that round-trips the double.
std::string format_double(double x);

Json to_json(const TemperednessReport& r);
Json to_json(const RepulsivenessReport& r);
Json to_json(const CountingReport& r);
Json to_json(const BetaStar& b);
Json to_json(const QResult& q);
Json to_json(const Lemma27Report& r);
Json to_json(const ExpansionReport& r);
Json to_json(const DlrReport& r);
Json to_json(const UniquenessCertificate& c);
Json to_json(const DecayTable& t);

/// Columns N_k,mean,se,bound_a,bound_b,mode,samples,seed.
std::string decay_csv(const DecayTable& t);

}  // namespace gibbscert
