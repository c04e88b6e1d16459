#pragma once

#include "exoamp/io.hpp"
#include "exoamp/loop.hpp"
#include "exoamp/powerlaw.hpp"
#include "exoamp/stats.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace exoamp {

/// Parsed run configuration (schema-validated, unknown fields rejected).
struct RunConfig {
    uint64_t seed = 0;

    struct Synth {
        int n_subjects = 1;
        double dt = 1e-3;
        AmplitudeBoost boost = AmplitudeBoost::compounding;
        double M_e = 1.01;
        SeaModel sea;
        GroundTruthSubject subject; // template; per-subject streams derive from seed
    };
    std::optional<Synth> synth;

    struct Design {
        double M_h = 0.11, M_e = 1.01;
        double K_low = 0.0, K_high = 0.0;
        double phi_deg = 0.0;
        std::optional<PowerLaw> law; // absent: use the cohort law from powerlaw.json
        CascadeSpec cascade;
        bool normalize_cascade_gain = false;
    };
    std::optional<Design> design;

    struct Analyze {
        SeaModel sea;
        std::vector<double> probe_omegas{1.0, 10.0};
        int k_grid = 41;
        bool bode = true;
    };
    std::optional<Analyze> analyze;
};

RunConfig parse_run_config(const io::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

std::string subject_label(int index); // A, B, ... then S27, S28, ...

/// In-memory identification of one synthetic subject: synthesize all nine
/// experiments, extract the ten per-period samples, fit M1/M2/M3.
struct ExperimentRecord {
    ExperimentSpec spec;
    std::vector<FrequencySample> samples;
    FitResult m1, m2, m3;
};

struct SubjectRecord {
    std::string id;
    std::vector<ExperimentRecord> experiments;
};

SubjectRecord identify_subject(const GroundTruthSubject& subject, const SeaModel& sea,
                               double M_e, double dt, AmplitudeBoost boost,
                               uint32_t subject_index);

RssTable make_rss_table(const std::vector<SubjectRecord>& cohort);

/// Cohort power law: per-experiment geometric averages of the M2 (K_h, H_h)
/// fits across subjects, then one log-log regression over those averages.
PowerLaw cohort_power_law(const std::vector<SubjectRecord>& cohort);
PowerLaw subject_power_law(const SubjectRecord& record);

// ---- file-based pipeline verbs -------------------------------------------
// All verbs operate inside one pipeline directory (`out`): synth writes
// raw/, identify writes identify/, then ftest/powerlaw/design/analyze/report
// each add their artifact.  Missing upstream artifacts raise ConfigError
// naming the verb that produces them.

void verb_synth(const RunConfig& cfg, const std::filesystem::path& out);
void verb_identify(const RunConfig& cfg, const std::filesystem::path& out);
void verb_ftest(const RunConfig& cfg, const std::filesystem::path& out);
void verb_powerlaw(const RunConfig& cfg, const std::filesystem::path& out);
void verb_design(const RunConfig& cfg, const std::filesystem::path& out);
void verb_analyze(const RunConfig& cfg, const std::filesystem::path& out);
void verb_report(const RunConfig& cfg, const std::filesystem::path& out, bool csv_tables);

} // namespace exoamp
