#include "exoamp/io.hpp"

#include "exoamp/kernels.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>

namespace exoamp::io {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& context)
{
    if (!j.is_object())
        throw ConfigError(context + ": expected a JSON object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items())
        if (!ok.count(key))
            throw ConfigError(context + ": unknown field '" + key + "'");
}

double get_number(const json& j, const char* key, const std::string& context)
{
    if (!j.contains(key))
        throw ConfigError(context + ": missing field '" + key + "'");
    if (!j[key].is_number())
        throw ConfigError(context + ": field '" + std::string(key) + "' must be a number");
    return j[key].get<double>();
}

double get_number_or(const json& j, const char* key, double fallback,
                     const std::string& context)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number())
        throw ConfigError(context + ": field '" + std::string(key) + "' must be a number");
    return j[key].get<double>();
}

json to_json(const PowerLaw& law)
{
    json j{{"beta0", law.beta0}, {"beta1", law.beta1}};
    if (std::isfinite(law.r2))
        j["r2"] = law.r2;
    return j;
}

PowerLaw powerlaw_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"beta0", "beta1", "r2"}, context);
    PowerLaw law;
    law.beta0 = get_number(j, "beta0", context);
    law.beta1 = get_number(j, "beta1", context);
    law.r2 = get_number_or(j, "r2", std::numeric_limits<double>::quiet_NaN(), context);
    return law;
}

json to_json(const JointParams& p)
{
    return {{"K_h", p.K_h}, {"H_h", p.H_h}, {"B_h", p.B_h}, {"M_h", p.M_h},
            {"flagged", p.flagged}};
}

JointParams joint_params_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"K_h", "H_h", "B_h", "M_h", "flagged"}, context);
    JointParams p;
    p.K_h = get_number(j, "K_h", context);
    p.H_h = get_number_or(j, "H_h", 0.0, context);
    p.B_h = get_number_or(j, "B_h", 0.0, context);
    p.M_h = get_number(j, "M_h", context);
    p.flagged = j.value("flagged", false);
    return p;
}

json to_json(const CouplingConfig& c) { return {{"M_e", c.M_e}, {"alpha", c.alpha}}; }

CouplingConfig coupling_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"M_e", "alpha"}, context);
    CouplingConfig c;
    c.M_e = get_number(j, "M_e", context);
    c.alpha = get_number_or(j, "alpha", 1.0, context);
    c.validate();
    return c;
}

json to_json(const SeaModel& sea)
{
    return {{"omega_sea", sea.omega_sea}, {"zeta_sea", sea.zeta_sea}};
}

SeaModel sea_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"omega_sea", "zeta_sea"}, context);
    SeaModel sea;
    sea.omega_sea = get_number_or(j, "omega_sea", sea.omega_sea, context);
    sea.zeta_sea = get_number_or(j, "zeta_sea", sea.zeta_sea, context);
    sea.validate();
    return sea;
}

json to_json(const FitResult& fit)
{
    json residuals = json::array();
    for (const auto& r : fit.residuals)
        residuals.push_back({r.real(), r.imag()});
    return {{"kind", to_string(fit.kind)}, {"params", to_json(fit.params)},
            {"rss", fit.rss},             {"r2", fit.r2},
            {"cond", fit.cond},           {"residuals", residuals}};
}

FitResult fit_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"kind", "params", "rss", "r2", "cond", "residuals"}, context);
    FitResult fit;
    fit.kind = model_kind_from_string(j.at("kind").get<std::string>());
    fit.params = joint_params_from_json(j.at("params"), context + ".params");
    fit.rss = get_number(j, "rss", context);
    fit.r2 = get_number(j, "r2", context);
    fit.cond = get_number_or(j, "cond", 0.0, context);
    for (const auto& r : j.value("residuals", json::array()))
        fit.residuals.emplace_back(r.at(0).get<double>(), r.at(1).get<double>());
    return fit;
}

json to_json(const FrequencySample& s)
{
    return {{"omega", s.omega}, {"S_re", s.S.real()}, {"S_im", s.S.imag()},
            {"t_start", s.t_start}, {"t_end", s.t_end}};
}

FrequencySample sample_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"omega", "S_re", "S_im", "t_start", "t_end"}, context);
    FrequencySample s;
    s.omega = get_number(j, "omega", context);
    s.S = {get_number(j, "S_re", context), get_number(j, "S_im", context)};
    s.t_start = get_number_or(j, "t_start", 0.0, context);
    s.t_end = get_number_or(j, "t_end", 0.0, context);
    return s;
}

json to_json(const AmplifierDesign& d)
{
    return {{"k_p", d.k_p},
            {"f", d.f},
            {"k_f", d.k_f},
            {"phi_deg", d.phi_deg},
            {"K_low", d.K_low},
            {"K_high", d.K_high},
            {"K_hat", d.K_hat},
            {"omega_gc_hat", d.omega_gc_hat},
            {"M_h", d.M_h},
            {"M_e", d.M_e},
            {"powerlaw", to_json(d.law)}};
}

AmplifierDesign design_from_json(const json& j, const std::string& context)
{
    require_keys(j,
                 {"k_p", "f", "k_f", "phi_deg", "K_low", "K_high", "K_hat", "omega_gc_hat",
                  "M_h", "M_e", "powerlaw"},
                 context);
    AmplifierDesign d;
    d.k_p = get_number(j, "k_p", context);
    d.f = get_number(j, "f", context);
    d.k_f = get_number(j, "k_f", context);
    d.phi_deg = get_number(j, "phi_deg", context);
    d.K_low = get_number(j, "K_low", context);
    d.K_high = get_number(j, "K_high", context);
    d.K_hat = get_number(j, "K_hat", context);
    d.omega_gc_hat = get_number(j, "omega_gc_hat", context);
    d.M_h = get_number(j, "M_h", context);
    d.M_e = get_number(j, "M_e", context);
    if (!j.contains("powerlaw"))
        throw ConfigError(context + ": missing field 'powerlaw'");
    d.law = powerlaw_from_json(j.at("powerlaw"), context + ".powerlaw");
    return d;
}

json to_json(const LagCascade& c)
{
    return {{"f", c.f},       {"k_f", c.k_f},   {"dc_gain", c.dc_gain}, {"r_zp", c.r_zp},
            {"r_pp", c.r_pp}, {"poles", c.poles}, {"zeros", c.zeros}};
}

LagCascade cascade_from_json(const json& j, const std::string& context)
{
    require_keys(j, {"f", "k_f", "dc_gain", "r_zp", "r_pp", "poles", "zeros"}, context);
    LagCascade c;
    c.f = get_number(j, "f", context);
    c.k_f = get_number(j, "k_f", context);
    c.dc_gain = get_number(j, "dc_gain", context);
    c.r_zp = get_number(j, "r_zp", context);
    c.r_pp = get_number(j, "r_pp", context);
    c.poles = j.at("poles").get<std::vector<double>>();
    c.zeros = j.at("zeros").get<std::vector<double>>();
    if (c.poles.size() != c.zeros.size() || c.poles.empty())
        throw ConfigError(context + ": poles/zeros size mismatch");
    return c;
}

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts)
{
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f)
        throw ConfigError("cannot open for writing: " + path.string());
    std::string buf;
    buf.reserve(1 << 20);
    buf += "t,theta_e,tau_c,tau_s\n";
    char line[160];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const int len = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n",
                                      ts.t(i), ts.theta_e[i], ts.tau_c[i], ts.tau_s[i]);
        buf.append(line, static_cast<std::size_t>(len));
        if (buf.size() > (1 << 20) - 256) {
            std::fwrite(buf.data(), 1, buf.size(), f);
            buf.clear();
        }
    }
    std::fwrite(buf.data(), 1, buf.size(), f);
    if (std::fclose(f) != 0)
        throw ConfigError("write failed: " + path.string());
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,theta_e,tau_c,tau_s", 0) != 0)
        throw ConfigError(path.string() + ": expected header 't,theta_e,tau_c,tau_s'");

    TimeSeries ts;
    double t0 = 0.0, t1 = 0.0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const char* p = line.c_str();
        char* end = nullptr;
        double v[4];
        for (int c = 0; c < 4; ++c) {
            v[c] = std::strtod(p, &end);
            if (end == p)
                throw ConfigError(path.string() + ": malformed row " + std::to_string(row + 2));
            p = (*end == ',') ? end + 1 : end;
        }
        if (row == 0)
            t0 = v[0];
        else if (row == 1)
            t1 = v[0];
        ts.theta_e.push_back(v[1]);
        ts.tau_c.push_back(v[2]);
        ts.tau_s.push_back(v[3]);
        ++row;
    }
    if (row < 2)
        throw ConfigError(path.string() + ": too few rows");
    ts.dt = t1 - t0;
    if (!(ts.dt > 0.0))
        throw ConfigError(path.string() + ": non-increasing time column");
    return ts;
}

void write_markers_json(const std::filesystem::path& path,
                        const std::vector<PeriodMarker>& markers)
{
    json arr = json::array();
    for (const auto& m : markers)
        arr.push_back({{"period", m.period},
                       {"t_start", m.t_start},
                       {"t_end", m.t_end},
                       {"omega", m.omega},
                       {"amplitude", m.amplitude}});
    save_json_file(path, json{{"format", "exoamp-markers-1"}, {"markers", arr}});
}

std::vector<PeriodMarker> read_markers_json(const std::filesystem::path& path)
{
    const json j = load_json_file(path);
    require_keys(j, {"format", "markers"}, path.string());
    if (j.value("format", "") != "exoamp-markers-1")
        throw ConfigError(path.string() + ": unsupported format tag");
    std::vector<PeriodMarker> out;
    for (const auto& m : j.at("markers")) {
        require_keys(m, {"period", "t_start", "t_end", "omega", "amplitude"}, path.string());
        out.push_back({m.at("period").get<int>(), m.at("t_start").get<double>(),
                       m.at("t_end").get<double>(), m.at("omega").get<double>(),
                       m.at("amplitude").get<double>()});
    }
    return out;
}

json load_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out)
        throw ConfigError("write failed: " + path.string());
}

std::string fnv1a64_hex(const void* data, std::size_t n)
{
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string hash_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open: " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a64_hex(content.data(), content.size());
}

void write_manifest(const std::filesystem::path& path, const Manifest& m)
{
    json arr = json::array();
    for (const auto& [p, h] : m.artifacts)
        arr.push_back({{"path", p}, {"fnv1a64", h}});
    save_json_file(path, json{{"format", "exoamp-manifest-1"},
                              {"seed", m.seed},
                              {"isa", m.isa},
                              {"artifacts", arr}});
}

Manifest read_manifest(const std::filesystem::path& path)
{
    const json j = load_json_file(path);
    require_keys(j, {"format", "seed", "isa", "artifacts"}, path.string());
    Manifest m;
    m.seed = j.value("seed", 0ULL);
    m.isa = j.value("isa", "");
    for (const auto& a : j.at("artifacts"))
        m.artifacts.emplace_back(a.at("path").get<std::string>(),
                                 a.at("fnv1a64").get<std::string>());
    return m;
}

} // namespace exoamp::io
