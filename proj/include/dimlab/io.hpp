#pragma once

#include "dimlab/agreement.hpp"
#include "dimlab/capacity.hpp"
#include "dimlab/construction.hpp"
#include "dimlab/function.hpp"
#include "dimlab/generator.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dimlab {

using json = nlohmann::json;

// rationals travel as "p/q" strings so certificates stay exact on disk

json to_json(const SampledFunction& f);
SampledFunction sampled_from_json(const json& j);

json to_json(const PiecewiseFunction& f);
PiecewiseFunction piecewise_from_json(const json& j);

json to_json(const GridSubset& cells);
GridSubset grid_subset_from_json(const json& j);

json to_json(const IntervalCover& cover);
json to_json(const DimensionEstimate& est);
DimensionEstimate dimension_from_json(const json& j);

json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const json& j);

json to_json(const LedgerEntry& e);
LedgerEntry ledger_entry_from_json(const json& j);

json to_json(const ConstructionCertificate& cert);
ConstructionCertificate certificate_from_json(const json& j);

json to_json(const SubsetWitness& w);
SubsetWitness witness_from_json(const json& j);

// ---- files ----

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

/// CSV with the mandatory "x,y" header.
void write_function_csv(const std::string& path, const SampledFunction& f);
SampledFunction read_function_csv(const std::string& path);

std::string audit_csv(const std::vector<AuditRow>& rows);
std::string probe_csv(const std::vector<ProbeRow>& rows);
std::string counts_csv(const DimensionEstimate& est);

/// FNV-1a 64-bit, hex; used for input hashes in run manifests.
std::string fnv1a_hex(const std::string& bytes);

/// Writes <out>.manifest.json next to an output: command, flags, input
/// hashes, seed, mode banner.
void write_manifest(const std::string& out_path, const std::string& command,
                    const std::vector<std::string>& args, const std::vector<std::string>& inputs,
                    std::uint64_t seed, bool empirical);

}  // namespace dimlab
