#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsemplus/discovery.hpp"
#include "lsemplus/graph.hpp"
#include "lsemplus/lsem.hpp"
#include "lsemplus/metrics.hpp"
#include "lsemplus/sample.hpp"

namespace lsemplus::io {

// DAG text format: first line `d`, then one `j i` pair (edge j -> i) per line.
void write_dag(std::ostream& out, const Dag& dag);
Dag read_dag(std::istream& in);
Dag load_dag(const std::filesystem::path& path);

// Model document: {"d", "edges": [[j, i, c_ij], ...], "s": [...], "alpha"}.
nlohmann::json model_to_json(const LsemModel& model);
LsemModel model_from_json(const nlohmann::json& doc);
LsemModel load_model(const std::filesystem::path& path);

/// Samples as CSV with header X1..Xd; doubles printed in shortest round-trip form.
void write_samples(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& names = {});
/// Reads a sample CSV (header auto-detected) with raw margins.
SampleMatrix load_samples(const std::filesystem::path& path);

/// Ordering document: ordering, ancestral order, per-step audit trail and
/// parameters. `seed` is included when known.
nlohmann::json ordering_to_json(const OrderingResult& result, std::optional<std::uint64_t> seed = std::nullopt);
/// Reads the ancestral order back from an ordering document.
std::vector<Node> ancestral_order_from_json(const nlohmann::json& doc);

nlohmann::json sid_to_json(const SidScore& score);

/// Bootstrap rows: replicate,raw,normalized,seed.
void write_bootstrap_csv(std::ostream& out, const std::vector<BootstrapReplicate>& replicates);

/// Square matrix as CSV; non-finite entries print as NA.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

std::string format_double(double v);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace lsemplus::io
