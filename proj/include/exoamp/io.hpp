#pragma once

#include "exoamp/fractional.hpp"
#include "exoamp/protocol.hpp"
#include "exoamp/stats.hpp"
#include "exoamp/sysid.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace exoamp::io {

using json = nlohmann::json;

/// Rejects keys outside `allowed`; context names the enclosing object.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& context);

double get_number(const json& j, const char* key, const std::string& context);
double get_number_or(const json& j, const char* key, double fallback,
                     const std::string& context);

// value types <-> json (field names match the domain types)
json to_json(const PowerLaw& law);
PowerLaw powerlaw_from_json(const json& j, const std::string& context);
json to_json(const JointParams& p);
JointParams joint_params_from_json(const json& j, const std::string& context);
json to_json(const CouplingConfig& c);
CouplingConfig coupling_from_json(const json& j, const std::string& context);
json to_json(const SeaModel& sea);
SeaModel sea_from_json(const json& j, const std::string& context);
json to_json(const FitResult& fit);
FitResult fit_from_json(const json& j, const std::string& context);
json to_json(const FrequencySample& s);
FrequencySample sample_from_json(const json& j, const std::string& context);
json to_json(const AmplifierDesign& d);
AmplifierDesign design_from_json(const json& j, const std::string& context);
json to_json(const LagCascade& c);
LagCascade cascade_from_json(const json& j, const std::string& context);

// time series files: CSV columns t,theta_e,tau_c,tau_s plus a sidecar
// JSON with the period markers; the universal ingestion format for sysid.
void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts);
TimeSeries read_timeseries_csv(const std::filesystem::path& path);
void write_markers_json(const std::filesystem::path& path,
                        const std::vector<PeriodMarker>& markers);
std::vector<PeriodMarker> read_markers_json(const std::filesystem::path& path);

json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const json& j);

// FNV-1a 64-bit content hash, hex encoded; used by the synth manifest.
std::string fnv1a64_hex(const void* data, std::size_t n);
std::string hash_file(const std::filesystem::path& path);

struct Manifest {
    uint64_t seed = 0;
    std::string isa;
    std::vector<std::pair<std::string, std::string>> artifacts; // path, hash
};

void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

} // namespace exoamp::io
