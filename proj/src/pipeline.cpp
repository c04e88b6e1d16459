#include "exoamp/pipeline.hpp"

#include "exoamp/kernels.hpp"
#include "exoamp/stiffness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace exoamp {

namespace fs = std::filesystem;
using io::json;

namespace {

GroundTruthSubject subject_from_json(const json& j, const std::string& context)
{
    io::require_keys(j,
                     {"K_h", "powerlaw", "B_h", "M_h", "noise_std_torque", "noise_std_angle"},
                     context);
    GroundTruthSubject s;
    if (!j.contains("K_h") || !j.at("K_h").is_array())
        throw ConfigError(context + ": 'K_h' must be an array of per-group stiffnesses");
    s.K_h_by_group = j.at("K_h").get<std::vector<double>>();
    if (!j.contains("powerlaw"))
        throw ConfigError(context + ": missing 'powerlaw'");
    s.powerlaw = io::powerlaw_from_json(j.at("powerlaw"), context + ".powerlaw");
    s.B_h = io::get_number_or(j, "B_h", 0.0, context);
    s.M_h = io::get_number(j, "M_h", context);
    s.noise_std_torque = io::get_number_or(j, "noise_std_torque", 0.05, context);
    s.noise_std_angle = io::get_number_or(j, "noise_std_angle", 0.002, context);
    return s;
}

CascadeSpec cascade_spec_from_json(const json& j, const std::string& context)
{
    io::require_keys(j, {"n", "p_1", "r_pp"}, context);
    CascadeSpec c;
    if (j.contains("n"))
        c.n = j.at("n").get<int>();
    c.p_1 = io::get_number_or(j, "p_1", c.p_1, context);
    c.r_pp = io::get_number_or(j, "r_pp", c.r_pp, context);
    return c;
}

} // namespace

RunConfig parse_run_config(const json& j)
{
    io::require_keys(j, {"format", "seed", "synth", "design", "analyze"}, "config");
    if (j.value("format", "") != "exoamp-config-1")
        throw ConfigError("config: missing or unsupported 'format' (expected exoamp-config-1)");

    RunConfig cfg;
    if (j.contains("seed")) {
        const auto& s = j.at("seed");
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                       s.get<int64_t>() < 0))
            throw ConfigError("config: 'seed' must be a non-negative integer");
        cfg.seed = s.get<uint64_t>();
    }

    if (j.contains("synth")) {
        const json& s = j.at("synth");
        io::require_keys(s, {"subjects", "dt", "amplitude_boost", "M_e", "sea", "subject"},
                         "config.synth");
        RunConfig::Synth sy;
        if (s.contains("subjects"))
            sy.n_subjects = s.at("subjects").get<int>();
        if (sy.n_subjects < 1)
            throw ConfigError("config.synth: 'subjects' must be >= 1");
        sy.dt = io::get_number_or(s, "dt", 1e-3, "config.synth");
        const std::string boost = s.value("amplitude_boost", "compounding");
        if (boost == "compounding")
            sy.boost = AmplitudeBoost::compounding;
        else if (boost == "single_step")
            sy.boost = AmplitudeBoost::single_step;
        else
            throw ConfigError("config.synth: amplitude_boost must be compounding|single_step");
        sy.M_e = io::get_number_or(s, "M_e", 1.01, "config.synth");
        if (s.contains("sea"))
            sy.sea = io::sea_from_json(s.at("sea"), "config.synth.sea");
        if (!s.contains("subject"))
            throw ConfigError("config.synth: missing 'subject'");
        sy.subject = subject_from_json(s.at("subject"), "config.synth.subject");
        cfg.synth = sy;
    }

    if (j.contains("design")) {
        const json& d = j.at("design");
        io::require_keys(d,
                         {"M_h", "M_e", "K_low", "K_high", "phi_deg", "powerlaw", "cascade",
                          "normalize_cascade_gain"},
                         "config.design");
        RunConfig::Design de;
        de.M_h = io::get_number(d, "M_h", "config.design");
        de.M_e = io::get_number(d, "M_e", "config.design");
        de.K_low = io::get_number(d, "K_low", "config.design");
        de.K_high = io::get_number(d, "K_high", "config.design");
        de.phi_deg = io::get_number(d, "phi_deg", "config.design");
        if (d.contains("powerlaw"))
            de.law = io::powerlaw_from_json(d.at("powerlaw"), "config.design.powerlaw");
        if (d.contains("cascade"))
            de.cascade = cascade_spec_from_json(d.at("cascade"), "config.design.cascade");
        de.normalize_cascade_gain = d.value("normalize_cascade_gain", false);
        cfg.design = de;
    }

    if (j.contains("analyze")) {
        const json& a = j.at("analyze");
        io::require_keys(a, {"sea", "probe_omegas", "k_grid", "bode"}, "config.analyze");
        RunConfig::Analyze an;
        if (a.contains("sea"))
            an.sea = io::sea_from_json(a.at("sea"), "config.analyze.sea");
        if (a.contains("probe_omegas"))
            an.probe_omegas = a.at("probe_omegas").get<std::vector<double>>();
        if (a.contains("k_grid"))
            an.k_grid = a.at("k_grid").get<int>();
        an.bode = a.value("bode", true);
        cfg.analyze = an;
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path)
{
    return parse_run_config(io::load_json_file(path));
}

std::string subject_label(int index)
{
    if (index < 26)
        return std::string(1, static_cast<char>('A' + index));
    return "S" + std::to_string(index + 1);
}

SubjectRecord identify_subject(const GroundTruthSubject& subject, const SeaModel& sea,
                               double M_e, double dt, AmplitudeBoost boost,
                               uint32_t subject_index)
{
    SubjectRecord rec;
    rec.id = subject_label(static_cast<int>(subject_index));
    for (const ExperimentSpec& spec : build_protocol()) {
        const TimeSeries ts =
            synthesize_experiment(spec, subject, sea, dt, M_e, boost, subject_index);
        ExperimentRecord er;
        er.spec = spec;
        er.samples.reserve(ts.markers.size());
        for (const PeriodMarker& marker : ts.markers)
            er.samples.push_back(extract_sample(ts, marker));
        er.m1 = fit_model(er.samples, ModelKind::M1);
        er.m2 = fit_model(er.samples, ModelKind::M2);
        er.m3 = fit_model(er.samples, ModelKind::M3);
        rec.experiments.push_back(std::move(er));
    }
    return rec;
}

RssTable make_rss_table(const std::vector<SubjectRecord>& cohort)
{
    if (cohort.empty())
        throw ConfigError("make_rss_table: empty cohort");
    const int n_exp = static_cast<int>(cohort.front().experiments.size());
    const int n = static_cast<int>(cohort.front().experiments.front().samples.size());
    RssTable table(static_cast<int>(cohort.size()), n_exp, n);
    for (int s = 0; s < static_cast<int>(cohort.size()); ++s) {
        const auto& exps = cohort[static_cast<std::size_t>(s)].experiments;
        if (static_cast<int>(exps.size()) != n_exp)
            throw ConfigError("make_rss_table: ragged cohort (subject " +
                              cohort[static_cast<std::size_t>(s)].id + ")");
        for (int e = 0; e < n_exp; ++e) {
            table.set(s, e, ModelKind::M1, exps[static_cast<std::size_t>(e)].m1.rss);
            table.set(s, e, ModelKind::M2, exps[static_cast<std::size_t>(e)].m2.rss);
            table.set(s, e, ModelKind::M3, exps[static_cast<std::size_t>(e)].m3.rss);
        }
    }
    return table;
}

PowerLaw subject_power_law(const SubjectRecord& record)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : record.experiments)
        if (!e.m2.params.flagged)
            pts.emplace_back(e.m2.params.K_h, e.m2.params.H_h);
    return fit_power_law(pts);
}

PowerLaw cohort_power_law(const std::vector<SubjectRecord>& cohort)
{
    if (cohort.empty())
        throw ConfigError("cohort_power_law: empty cohort");
    const std::size_t n_exp = cohort.front().experiments.size();
    std::vector<std::pair<double, double>> pts;
    for (std::size_t e = 0; e < n_exp; ++e) {
        std::vector<double> Ks, Hs;
        for (const auto& sub : cohort) {
            const auto& fit = sub.experiments.at(e).m2;
            if (!fit.params.flagged) {
                Ks.push_back(fit.params.K_h);
                Hs.push_back(fit.params.H_h);
            }
        }
        if (Ks.empty())
            throw ConfigError("cohort_power_law: no unflagged M2 fits for experiment " +
                              std::to_string(e + 1));
        pts.emplace_back(geometric_average(Ks), geometric_average(Hs));
    }
    return fit_power_law(pts);
}

// ---- file-based verbs -----------------------------------------------------

namespace {

const char* isa_name()
{
    return kern::active_isa() == kern::Isa::avx2 ? "avx2" : "scalar";
}

void require_artifact(const fs::path& p, const std::string& producer)
{
    if (!fs::exists(p))
        throw ConfigError("missing upstream artifact " + p.string() + "; run the '" +
                          producer + "' verb first");
}

json record_to_json(const SubjectRecord& rec)
{
    json exps = json::array();
    for (const auto& e : rec.experiments) {
        json samples = json::array();
        for (const auto& s : e.samples)
            samples.push_back(io::to_json(s));
        exps.push_back({{"exp_id", e.spec.exp_id},
                        {"alpha", e.spec.alpha},
                        {"samples", samples},
                        {"fits",
                         {{"M1", io::to_json(e.m1)},
                          {"M2", io::to_json(e.m2)},
                          {"M3", io::to_json(e.m3)}}}});
    }
    return {{"format", "exoamp-identify-1"}, {"subject", rec.id}, {"experiments", exps}};
}

SubjectRecord record_from_json(const json& j)
{
    SubjectRecord rec;
    rec.id = j.at("subject").get<std::string>();
    const auto protocol = build_protocol();
    for (const auto& e : j.at("experiments")) {
        ExperimentRecord er;
        const int exp_id = e.at("exp_id").get<int>();
        if (exp_id < 1 || exp_id > 9)
            throw ConfigError("identify record: exp_id out of range");
        er.spec = protocol[static_cast<std::size_t>(exp_id - 1)];
        for (const auto& s : e.at("samples"))
            er.samples.push_back(io::sample_from_json(s, "identify.samples"));
        er.m1 = io::fit_from_json(e.at("fits").at("M1"), "identify.fits.M1");
        er.m2 = io::fit_from_json(e.at("fits").at("M2"), "identify.fits.M2");
        er.m3 = io::fit_from_json(e.at("fits").at("M3"), "identify.fits.M3");
        rec.experiments.push_back(std::move(er));
    }
    return rec;
}

std::vector<SubjectRecord> load_identify_records(const fs::path& out)
{
    const fs::path dir = out / "identify";
    require_artifact(dir / "identify.json", "identify");
    const json j = io::load_json_file(dir / "identify.json");
    std::vector<SubjectRecord> cohort;
    for (const auto& r : j.at("subjects"))
        cohort.push_back(record_from_json(r));
    if (cohort.empty())
        throw ConfigError("identify.json contains no subjects");
    return cohort;
}

RunConfig::Synth synth_or_default(const RunConfig& cfg)
{
    if (cfg.synth)
        return *cfg.synth;
    // default cohort: paper-average ground truth
    RunConfig::Synth sy;
    sy.subject.K_h_by_group = {16.35, 36.52, 65.12};
    sy.subject.powerlaw = {-0.23, 0.90, std::numeric_limits<double>::quiet_NaN()};
    sy.subject.M_h = 0.11;
    return sy;
}

} // namespace

void verb_synth(const RunConfig& cfg, const fs::path& out)
{
    const RunConfig::Synth sy = synth_or_default(cfg);
    const fs::path raw = out / "raw";
    fs::create_directories(raw);

    io::Manifest manifest;
    manifest.seed = cfg.seed;
    manifest.isa = isa_name();

    json index = json::array();
    for (int s = 0; s < sy.n_subjects; ++s) {
        GroundTruthSubject subject = sy.subject;
        subject.rng_seed = cfg.seed;
        const std::string label = subject_label(s);
        fs::create_directories(raw / label);
        for (const ExperimentSpec& spec : build_protocol()) {
            const TimeSeries ts = synthesize_experiment(spec, subject, sy.sea, sy.dt, sy.M_e,
                                                        sy.boost, static_cast<uint32_t>(s));
            const std::string stem = "exp" + std::to_string(spec.exp_id);
            const fs::path csv = raw / label / (stem + ".csv");
            const fs::path markers = raw / label / (stem + ".markers.json");
            io::write_timeseries_csv(csv, ts);
            io::write_markers_json(markers, ts.markers);
            manifest.artifacts.emplace_back(fs::relative(csv, out).string(),
                                            io::hash_file(csv));
            manifest.artifacts.emplace_back(fs::relative(markers, out).string(),
                                            io::hash_file(markers));
        }
        index.push_back(label);
    }
    io::save_json_file(raw / "subjects.json",
                       json{{"format", "exoamp-subjects-1"},
                            {"subjects", index},
                            {"dt", sy.dt},
                            {"M_e", sy.M_e},
                            {"sea", io::to_json(sy.sea)}});
    io::write_manifest(raw / "manifest.json", manifest);
}

void verb_identify(const RunConfig& cfg, const fs::path& out)
{
    (void)cfg;
    const fs::path raw = out / "raw";
    require_artifact(raw / "subjects.json", "synth");
    const json idx = io::load_json_file(raw / "subjects.json");

    std::vector<SubjectRecord> cohort;
    for (const auto& label_json : idx.at("subjects")) {
        const std::string label = label_json.get<std::string>();
        SubjectRecord rec;
        rec.id = label;
        const auto protocol = build_protocol();
        for (const ExperimentSpec& spec : protocol) {
            const std::string stem = "exp" + std::to_string(spec.exp_id);
            const fs::path csv = raw / label / (stem + ".csv");
            const fs::path markers = raw / label / (stem + ".markers.json");
            require_artifact(csv, "synth");
            require_artifact(markers, "synth");
            TimeSeries ts = io::read_timeseries_csv(csv);
            ts.markers = io::read_markers_json(markers);
            ExperimentRecord er;
            er.spec = spec;
            for (const PeriodMarker& marker : ts.markers)
                er.samples.push_back(extract_sample(ts, marker));
            er.m1 = fit_model(er.samples, ModelKind::M1);
            er.m2 = fit_model(er.samples, ModelKind::M2);
            er.m3 = fit_model(er.samples, ModelKind::M3);
            rec.experiments.push_back(std::move(er));
        }
        cohort.push_back(std::move(rec));
    }

    fs::create_directories(out / "identify");
    json subjects = json::array();
    for (const auto& rec : cohort)
        subjects.push_back(record_to_json(rec));
    io::save_json_file(out / "identify" / "identify.json",
                       json{{"format", "exoamp-identify-set-1"}, {"subjects", subjects}});

    const RssTable table = make_rss_table(cohort);
    json cells = json::array();
    for (int s = 0; s < table.n_sub(); ++s)
        for (int e = 0; e < table.n_exp(); ++e)
            for (ModelKind k : {ModelKind::M1, ModelKind::M2, ModelKind::M3})
                cells.push_back({{"sub", s}, {"exp", e}, {"model", to_string(k)},
                                 {"rss", table.get(s, e, k)}});
    io::save_json_file(out / "identify" / "rss_table.json",
                       json{{"format", "exoamp-rss-1"},
                            {"n_sub", table.n_sub()},
                            {"n_exp", table.n_exp()},
                            {"n_samples", table.n_samples()},
                            {"cells", cells}});
}

namespace {

RssTable rss_table_from_file(const fs::path& out)
{
    const fs::path p = out / "identify" / "rss_table.json";
    require_artifact(p, "identify");
    const json j = io::load_json_file(p);
    io::require_keys(j, {"format", "n_sub", "n_exp", "n_samples", "cells"}, p.string());
    RssTable table(j.at("n_sub").get<int>(), j.at("n_exp").get<int>(),
                   j.at("n_samples").get<int>());
    for (const auto& c : j.at("cells"))
        table.set(c.at("sub").get<int>(), c.at("exp").get<int>(),
                  model_kind_from_string(c.at("model").get<std::string>()),
                  c.at("rss").get<double>());
    return table;
}

json ftest_report_json(const FTestReport& r)
{
    return {{"scope", to_string(r.scope)},       {"index", r.index},
            {"comparison", to_string(r.comparison)}, {"F", r.F},
            {"d1", r.d1},                        {"d2", r.d2},
            {"F_crit", r.F_crit},                {"significant", r.significant}};
}

} // namespace

void verb_ftest(const RunConfig& cfg, const fs::path& out)
{
    (void)cfg;
    const RssTable table = rss_table_from_file(out);
    json reports = json::array();
    for (Comparison cmp : {Comparison::M1_vs_M3, Comparison::M2_vs_M3}) {
        for (int s = 0; s < table.n_sub(); ++s)
            reports.push_back(ftest_report_json(f_statistic(table, Scope::subject, s, cmp)));
        for (int e = 0; e < table.n_exp(); ++e)
            reports.push_back(
                ftest_report_json(f_statistic(table, Scope::experiment, e, cmp)));
        reports.push_back(ftest_report_json(f_statistic(table, Scope::all, -1, cmp)));
    }
    fs::create_directories(out / "ftest");
    io::save_json_file(out / "ftest" / "ftest.json",
                       json{{"format", "exoamp-ftest-1"}, {"p", 0.05}, {"reports", reports}});
}

void verb_powerlaw(const RunConfig& cfg, const fs::path& out)
{
    (void)cfg;
    const auto cohort = load_identify_records(out);
    json per_subject = json::array();
    json subject_ids = json::array();
    for (const auto& rec : cohort) {
        json j = io::to_json(subject_power_law(rec));
        j["subject"] = rec.id;
        per_subject.push_back(std::move(j));
        subject_ids.push_back(rec.id);
    }
    fs::create_directories(out / "powerlaw");
    io::save_json_file(out / "powerlaw" / "powerlaw.json",
                       json{{"format", "exoamp-powerlaw-1"},
                            {"per_subject", per_subject},
                            {"cohort", io::to_json(cohort_power_law(cohort))},
                            {"provenance",
                             {{"subjects", subject_ids},
                              {"model", "M2"},
                              {"points", "per-experiment geometric averages of M2 fits"}}}});
}

void verb_design(const RunConfig& cfg, const fs::path& out)
{
    if (!cfg.design)
        throw ConfigError("design verb requires a 'design' block in the config");
    const RunConfig::Design& d = *cfg.design;

    PowerLaw law;
    if (d.law) {
        law = *d.law;
    } else {
        const fs::path p = out / "powerlaw" / "powerlaw.json";
        require_artifact(p, "powerlaw");
        law = io::powerlaw_from_json(io::load_json_file(p).at("cohort"), "powerlaw.cohort");
    }

    const AmplifierDesign design = make_design(d.M_h, d.M_e, d.K_low, d.K_high, law, d.phi_deg);
    LagCascade cascade = build_lag_cascade(design, d.cascade);
    const double raw_gain = std::abs(eval_cascade(cascade, design.omega_gc_hat));
    double correction = 1.0;
    if (d.normalize_cascade_gain)
        correction = normalize_cascade_gain(cascade, design.omega_gc_hat);

    const double max_phi = loss_factor_and_ratio(
        law.beta1 < 1.0 ? d.K_high : d.K_low, law).phase_deg;
    fs::create_directories(out / "design");
    io::save_json_file(out / "design" / "design.json",
                       json{{"format", "exoamp-design-1"},
                            {"design", io::to_json(design)},
                            {"cascade", io::to_json(cascade)},
                            {"audit",
                             {{"feasible", true},
                              {"max_attainable_phi_deg", max_phi},
                              {"cascade_gain_at_omega_gc_hat", raw_gain},
                              {"gain_correction", correction},
                              {"normalized", d.normalize_cascade_gain}}}});
}

void verb_analyze(const RunConfig& cfg, const fs::path& out)
{
    const fs::path dj = out / "design" / "design.json";
    require_artifact(dj, "design");
    const json dfile = io::load_json_file(dj);
    const AmplifierDesign design = io::design_from_json(dfile.at("design"), "design.design");
    const LagCascade cascade = io::cascade_from_json(dfile.at("cascade"), "design.cascade");

    const RunConfig::Analyze an = cfg.analyze ? *cfg.analyze : RunConfig::Analyze{};
    LoopModel model{design, cascade, true, an.sea};

    const JointParams nominal = model.params_at(design.K_hat);
    const Margins nominal_margins = find_margins(model, nominal);
    const StabilitySweep sweep = stability_sweep(model, an.k_grid);
    const MarginalF marginal = marginal_f_search(design, CascadeSpec{
        static_cast<int>(cascade.poles.size()), cascade.poles.front(), cascade.r_pp}, an.sea);
    const auto amp = predicted_amplification(design, cascade, an.probe_omegas);

    json xovers = json::array();
    for (const auto& c : nominal_margins.crossovers)
        xovers.push_back({{"omega", c.omega}, {"pm_deg", c.pm_deg}});
    json sweep_json = json::array();
    for (const auto& p : sweep.points)
        sweep_json.push_back(
            {{"K_h", p.K_h}, {"min_pm", p.min_pm}, {"verdict", to_string(p.verdict)}});
    json amp_json = json::array();
    for (const auto& r : amp)
        amp_json.push_back({{"omega", r.omega},
                            {"ratio_ideal", r.ratio_ideal},
                            {"phase_ideal_deg", r.phase_ideal_deg},
                            {"ratio_cascade", r.ratio_cascade},
                            {"phase_cascade_deg", r.phase_cascade_deg}});

    fs::create_directories(out / "analyze");
    io::save_json_file(
        out / "analyze" / "analyze.json",
        json{{"format", "exoamp-analyze-1"},
             {"sea", io::to_json(an.sea)},
             {"margins_at_K_hat",
              {{"crossovers", xovers},
               {"min_pm", nominal_margins.min_pm},
               {"verdict", to_string(nominal_margins.verdict)},
               {"multiple", nominal_margins.multiple}}},
             {"sweep",
              {{"points", sweep_json},
               {"min_pm", sweep.min_pm},
               {"K_at_min", sweep.K_at_min},
               {"pm_at_K_low", sweep.pm_at_K_low},
               {"pm_at_K_high", sweep.pm_at_K_high},
               {"worst_at", sweep.worst_at_high ? "K_high" : "K_low"}}},
             {"marginal_f", {{"f", marginal.f}, {"bounded", marginal.bounded}}},
             {"amplification", amp_json}});

    if (an.bode) {
        for (double K : {design.K_low, design.K_hat, design.K_high}) {
            const BodeTrace tr = bode_trace(model, model.params_at(K));
            char name[64];
            std::snprintf(name, sizeof name, "bode_K%.2f.csv", K);
            std::ofstream f(out / "analyze" / name);
            f << "omega_rad_s,P_mag_db,P_phase_deg,F_mag_db,F_phase_deg,L_mag_db,L_phase_deg\n";
            for (std::size_t i = 0; i < tr.omega.size(); ++i) {
                const auto db = [](std::complex<double> v) {
                    return 20.0 * std::log10(std::abs(v));
                };
                const auto ph = [](std::complex<double> v) { return deg(std::arg(v)); };
                char line[256];
                std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                              tr.omega[i], db(tr.P[i]), ph(tr.P[i]), db(tr.F[i]), ph(tr.F[i]),
                              db(tr.L[i]), ph(tr.L[i]));
                f << line;
            }
        }
    }
}

void verb_report(const RunConfig& cfg, const fs::path& out, bool csv_tables)
{
    (void)cfg;
    const auto cohort = load_identify_records(out);
    const fs::path ftest_path = out / "ftest" / "ftest.json";
    const fs::path law_path = out / "powerlaw" / "powerlaw.json";
    const fs::path design_path = out / "design" / "design.json";
    const fs::path analyze_path = out / "analyze" / "analyze.json";
    require_artifact(ftest_path, "ftest");
    require_artifact(law_path, "powerlaw");
    require_artifact(design_path, "design");
    require_artifact(analyze_path, "analyze");

    // phase-shift table (Table II analogue): per subject x group
    json phase_table = json::array();
    for (const auto& rec : cohort) {
        json row{{"subject", rec.id}};
        for (int g = 0; g < 3; ++g) {
            std::vector<std::vector<FrequencySample>> group;
            for (const auto& e : rec.experiments)
                if (e.spec.group() == g)
                    group.push_back(e.samples);
            const PhaseStats st = phase_shift_stats(group);
            row["group" + std::to_string(g + 1)] = {{"mean_deg", st.mean_deg},
                                                    {"stderr_deg", st.stderr_deg}};
        }
        phase_table.push_back(std::move(row));
    }

    // parameter table (Table III analogue): M2 K_h/H_h/R2 + geometric averages
    json param_table = json::array();
    for (int e = 0; e < 9; ++e) {
        json row{{"exp_id", e + 1}};
        std::vector<double> Ks, Hs;
        json per_sub = json::object();
        for (const auto& rec : cohort) {
            const auto& fit = rec.experiments.at(static_cast<std::size_t>(e)).m2;
            per_sub[rec.id] = {{"K_h", fit.params.K_h},
                               {"H_h", fit.params.H_h},
                               {"r2", fit.r2}};
            if (!fit.params.flagged) {
                Ks.push_back(fit.params.K_h);
                Hs.push_back(fit.params.H_h);
            }
        }
        row["subjects"] = per_sub;
        row["K_h_geo_avg"] = geometric_average(Ks);
        row["H_h_geo_avg"] = geometric_average(Hs);
        param_table.push_back(std::move(row));
    }

    const json ftest = io::load_json_file(ftest_path);
    const json law = io::load_json_file(law_path);
    const json design = io::load_json_file(design_path);
    const json analyze = io::load_json_file(analyze_path);

    const json report{{"format", "exoamp-report-1"},
                      {"phase_shift_table", phase_table},
                      {"parameter_table", param_table},
                      {"ftest", ftest.at("reports")},
                      {"powerlaw", law.at("cohort")},
                      {"design_audit", design.at("audit")},
                      {"design", design.at("design")},
                      {"amplification", analyze.at("amplification")}};
    fs::create_directories(out / "report");
    io::save_json_file(out / "report" / "report.json", report);

    if (csv_tables) {
        {
            std::ofstream f(out / "report" / "phase_table.csv");
            f << "subject,group1_mean_deg,group1_stderr_deg,group2_mean_deg,group2_stderr_deg,"
                 "group3_mean_deg,group3_stderr_deg\n";
            for (const auto& row : phase_table) {
                f << row.at("subject").get<std::string>();
                for (int g = 1; g <= 3; ++g) {
                    const auto& c = row.at("group" + std::to_string(g));
                    f << ',' << c.at("mean_deg").get<double>() << ','
                      << c.at("stderr_deg").get<double>();
                }
                f << '\n';
            }
        }
        {
            std::ofstream f(out / "report" / "params_table.csv");
            f << "exp_id,subject,K_h_Nm_per_rad,H_h_Nm_per_rad,r2\n";
            for (const auto& row : param_table) {
                for (const auto& [sub, v] : row.at("subjects").items())
                    f << row.at("exp_id").get<int>() << ',' << sub << ','
                      << v.at("K_h").get<double>() << ',' << v.at("H_h").get<double>() << ','
                      << v.at("r2").get<double>() << '\n';
                f << row.at("exp_id").get<int>() << ",geo_avg,"
                  << row.at("K_h_geo_avg").get<double>() << ','
                  << row.at("H_h_geo_avg").get<double>() << ",\n";
            }
        }
        {
            std::ofstream f(out / "report" / "ftest_table.csv");
            f << "scope,index,comparison,F,d1,d2,F_crit,significant\n";
            for (const auto& r : ftest.at("reports"))
                f << r.at("scope").get<std::string>() << ',' << r.at("index").get<int>() << ','
                  << r.at("comparison").get<std::string>() << ',' << r.at("F").get<double>()
                  << ',' << r.at("d1").get<int>() << ',' << r.at("d2").get<int>() << ','
                  << r.at("F_crit").get<double>() << ','
                  << (r.at("significant").get<bool>() ? 1 : 0) << '\n';
        }
        {
            std::ofstream f(out / "report" / "amplification_table.csv");
            f << "omega_rad_s,ratio_ideal,phase_ideal_deg,ratio_cascade,phase_cascade_deg\n";
            for (const auto& r : analyze.at("amplification"))
                f << r.at("omega").get<double>() << ',' << r.at("ratio_ideal").get<double>()
                  << ',' << r.at("phase_ideal_deg").get<double>() << ','
                  << r.at("ratio_cascade").get<double>() << ','
                  << r.at("phase_cascade_deg").get<double>() << '\n';
        }
        {
            std::ofstream f(out / "report" / "powerlaw.csv");
            f << "beta0,beta1,r2\n";
            f << law.at("cohort").at("beta0").get<double>() << ','
              << law.at("cohort").at("beta1").get<double>() << ','
              << law.at("cohort").at("r2").get<double>() << '\n';
        }
    }
}

} // namespace exoamp
