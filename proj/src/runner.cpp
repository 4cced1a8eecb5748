#include "qkd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qkd::run {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

struct KvFile {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
    std::string origin;

    bool has(const std::string& k) const { return values.count(k) > 0; }
    std::string get(const std::string& k, const std::string& def) const {
        auto it = values.find(k);
        return it == values.end() ? def : it->second;
    }
    double get_double(const std::string& k, double def) const {
        auto it = values.find(k);
        if (it == values.end()) return def;
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            throw ConfigError(origin + ":" + std::to_string(lines.at(k)) +
                              ": invalid number for '" + k + "': " + it->second);
        }
    }
    long long get_int(const std::string& k, long long def) const {
        auto it = values.find(k);
        if (it == values.end()) return def;
        try {
            std::size_t pos = 0;
            long long v = std::stoll(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            throw ConfigError(origin + ":" + std::to_string(lines.at(k)) +
                              ": invalid integer for '" + k + "': " + it->second);
        }
    }
    bool get_bool(const std::string& k, bool def) const {
        auto it = values.find(k);
        if (it == values.end()) return def;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError(origin + ":" + std::to_string(lines.at(k)) +
                          ": invalid boolean for '" + k + "': " + it->second);
    }
};

KvFile parse_kv(const std::string& text, const std::string& origin) {
    KvFile kv;
    kv.origin = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key or value");
        kv.values[key] = val;
        kv.lines[key] = lineno;
    }
    return kv;
}

const char* kKnownKeys[] = {
    "model", "epsilon", "phase.kind", "phase.N", "tha.I", "tha.N", "pm.I",
    "pm.Il", "pm.N", "mu", "nu", "omega", "optimize", "grid.mu_min",
    "grid.mu_max", "grid.mu_points", "grid.nu_min", "grid.nu_points",
    "grid.refine_rounds", "channel.eta_det", "channel.p_d", "channel.alpha_db",
    "channel.delta_a", "channel.f_ec", "distance.start", "distance.stop",
    "distance.step", "lp.n_cut", "lp.restarts", "lp.polish", "seed", "plot"};

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), path);
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& origin) {
    KvFile kv = parse_kv(text, origin);
    for (const auto& [key, _] : kv.values) {
        bool known = false;
        for (const char* k : kKnownKeys)
            if (key == k) { known = true; break; }
        if (!known)
            throw ConfigError(origin + ":" + std::to_string(kv.lines.at(key)) +
                              ": unknown key '" + key + "'");
    }
    RunConfig c;
    std::string model = kv.get("model", "general_epsilon");
    if (model == "general_epsilon") {
        engine::GeneralEpsilonModel m;
        m.epsilon = kv.get_double("epsilon", 0.0);
        std::string kind = kv.get("phase.kind", "uniform");
        if (kind == "uniform") {
            m.dist = source::PhaseDistribution::uniform();
        } else if (kind == "discrete") {
            m.dist = source::PhaseDistribution::discrete(
                static_cast<int>(kv.get_int("phase.N", 8)));
        } else {
            throw ConfigError(origin + ": phase.kind must be uniform or discrete");
        }
        c.scenario.model = m;
    } else if (model == "characterized_tha") {
        engine::CharacterizedThaModel m;
        m.back_intensity = kv.get_double("tha.I", 0.0);
        m.phase_count = static_cast<int>(kv.get_int("tha.N", 8));
        c.scenario.model = m;
    } else if (model == "extra_pm") {
        engine::ExtraPmModel m;
        m.encoder_intensity = kv.get_double("pm.I", 0.0);
        m.pm_intensity = kv.get_double("pm.Il", 0.0);
        m.phase_count = static_cast<int>(kv.get_int("pm.N", 4));
        c.scenario.model = m;
    } else {
        throw ConfigError(origin + ": unknown model '" + model + "'");
    }
    c.scenario.intensities.mu = kv.get_double("mu", 0.5);
    c.scenario.intensities.nu = kv.get_double("nu", 0.1);
    c.scenario.intensities.omega = kv.get_double("omega", 0.0);
    c.scenario.channel.eta_det = kv.get_double("channel.eta_det", 0.65);
    c.scenario.channel.p_d = kv.get_double("channel.p_d", 7.2e-8);
    c.scenario.channel.alpha_db = kv.get_double("channel.alpha_db", 0.2);
    c.scenario.channel.delta_a = kv.get_double("channel.delta_a", 0.08);
    c.scenario.channel.f_ec = kv.get_double("channel.f_ec", 1.16);
    c.scenario.n_cut = static_cast<int>(kv.get_int("lp.n_cut", 10));
    c.engine.optimize_intensities = kv.get_bool("optimize", true);
    c.engine.grid.mu_min = kv.get_double("grid.mu_min", 0.05);
    c.engine.grid.mu_max = kv.get_double("grid.mu_max", 1.0);
    c.engine.grid.mu_points = static_cast<int>(kv.get_int("grid.mu_points", 10));
    c.engine.grid.nu_min = kv.get_double("grid.nu_min", 0.005);
    c.engine.grid.nu_points = static_cast<int>(kv.get_int("grid.nu_points", 8));
    c.engine.grid.refine_rounds = static_cast<int>(kv.get_int("grid.refine_rounds", 2));
    c.engine.reference_policy.restarts = static_cast<int>(kv.get_int("lp.restarts", 50));
    c.engine.reference_policy.polish_iters = static_cast<int>(kv.get_int("lp.polish", 2));
    c.engine.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
    c.dist_start = kv.get_double("distance.start", 0.0);
    c.dist_stop = kv.get_double("distance.stop", 100.0);
    c.dist_step = kv.get_double("distance.step", 10.0);
    c.plot = kv.get_bool("plot", true);
    if (c.dist_step <= 0.0) throw ConfigError(origin + ": distance.step must be > 0");
    c.scenario.validate();
    return c;
}

std::vector<double> RunConfig::distances() const {
    std::vector<double> d;
    for (double x = dist_start; x <= dist_stop + 1e-9; x += dist_step) d.push_back(x);
    return d;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string RunConfig::resolved_text() const {
    std::ostringstream os;
    auto put = [&](const std::string& k, const std::string& v) {
        os << "# " << k << " = " << v << "\n";
    };
    if (const auto* g = std::get_if<engine::GeneralEpsilonModel>(&scenario.model)) {
        put("model", "general_epsilon");
        put("epsilon", format_float(g->epsilon));
        put("phase.kind", g->dist.is_discrete() ? "discrete" : "uniform");
        if (g->dist.is_discrete()) put("phase.N", std::to_string(g->dist.discrete_count));
    } else if (const auto* t = std::get_if<engine::CharacterizedThaModel>(&scenario.model)) {
        put("model", "characterized_tha");
        put("tha.I", format_float(t->back_intensity));
        put("tha.N", std::to_string(t->phase_count));
    } else {
        const auto& m = std::get<engine::ExtraPmModel>(scenario.model);
        put("model", "extra_pm");
        put("pm.I", format_float(m.encoder_intensity));
        put("pm.Il", format_float(m.pm_intensity));
        put("pm.N", std::to_string(m.phase_count));
    }
    put("mu", format_float(scenario.intensities.mu));
    put("nu", format_float(scenario.intensities.nu));
    put("omega", format_float(scenario.intensities.omega));
    put("channel.eta_det", format_float(scenario.channel.eta_det));
    put("channel.p_d", format_float(scenario.channel.p_d));
    put("channel.alpha_db", format_float(scenario.channel.alpha_db));
    put("channel.delta_a", format_float(scenario.channel.delta_a));
    put("channel.f_ec", format_float(scenario.channel.f_ec));
    put("lp.n_cut", std::to_string(scenario.n_cut));
    put("lp.restarts", std::to_string(engine.reference_policy.restarts));
    put("lp.polish", std::to_string(engine.reference_policy.polish_iters));
    put("optimize", engine.optimize_intensities ? "true" : "false");
    put("grid.mu_min", format_float(engine.grid.mu_min));
    put("grid.mu_max", format_float(engine.grid.mu_max));
    put("grid.mu_points", std::to_string(engine.grid.mu_points));
    put("grid.nu_min", format_float(engine.grid.nu_min));
    put("grid.nu_points", std::to_string(engine.grid.nu_points));
    put("grid.refine_rounds", std::to_string(engine.grid.refine_rounds));
    put("seed", std::to_string(engine.seed));
    put("distance.start", format_float(dist_start));
    put("distance.stop", format_float(dist_stop));
    put("distance.step", format_float(dist_step));
    return os.str();
}

void write_rates_csv(const std::string& path,
                     const std::vector<engine::KeyRatePoint>& points,
                     const std::string& resolved_config) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << resolved_config;
    out << "distance_km,mu,nu,Q_muZ,E_muZ,Y1_lower,eph1_upper,lambda_EC,rate,status\n";
    for (const auto& p : points) {
        out << format_float(p.distance_km) << ',' << format_float(p.mu) << ','
            << format_float(p.nu) << ',' << format_float(p.gain_mu_z) << ','
            << format_float(p.qber_mu_z) << ',' << format_float(p.y1_lower) << ','
            << format_float(p.eph1_upper) << ',' << format_float(p.lambda_ec) << ','
            << format_float(p.rate) << ',' << p.status << "\n";
    }
}

void write_rate_svg(const std::string& path, const std::vector<PlotSeries>& series) {
    const double W = 720, H = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    double xmin = 0, xmax = 1, ymin_log = -8, ymax_log = 0;
    bool any = false;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (y <= 0) continue;
            if (!any) {
                xmin = xmax = x;
                ymin_log = ymax_log = std::log10(y);
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin_log = std::min(ymin_log, std::log10(y));
                ymax_log = std::max(ymax_log, std::log10(y));
            }
        }
    }
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            (void)y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    ymin_log = std::floor(ymin_log) - 0.2;
    ymax_log = std::ceil(ymax_log) + 0.2;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double ylog) {
        return H - mb - (ylog - ymin_log) / (ymax_log - ymin_log) * (H - mt - mb);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr
        << "' height='" << H - mt - mb << "' fill='none' stroke='black'/>\n";
    for (int d = static_cast<int>(std::ceil(ymin_log)); d <= ymax_log; ++d) {
        double y = py(d);
        out << "<line x1='" << ml << "' y1='" << y << "' x2='" << W - mr << "' y2='" << y
            << "' stroke='#dddddd'/>\n";
        out << "<text x='" << ml - 8 << "' y='" << y + 4
            << "' text-anchor='end' font-size='12'>1e" << d << "</text>\n";
    }
    int xticks = 6;
    for (int i = 0; i <= xticks; ++i) {
        double x = xmin + (xmax - xmin) * i / xticks;
        out << "<text x='" << px(x) << "' y='" << H - mb + 18
            << "' text-anchor='middle' font-size='12'>" << format_float(x) << "</text>\n";
    }
    out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 12
        << "' text-anchor='middle' font-size='13'>distance (km)</text>\n";
    out << "<text x='16' y='" << (mt + H - mb) / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
        << (mt + H - mb) / 2 << ")'>secret-key rate</text>\n";
    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 6];
        std::ostringstream pts;
        bool open = false;
        for (auto [x, y] : s.points) {
            if (y <= 0) {
                if (open) {
                    out << "<polyline fill='none' stroke='" << col
                        << "' stroke-width='1.5' points='" << pts.str() << "'/>\n";
                    pts.str("");
                    open = false;
                }
                continue;
            }
            pts << px(x) << ',' << py(std::log10(y)) << ' ';
            open = true;
        }
        if (open)
            out << "<polyline fill='none' stroke='" << col
                << "' stroke-width='1.5' points='" << pts.str() << "'/>\n";
        out << "<text x='" << W - mr - 8 << "' y='" << mt + 18 + 16 * ci
            << "' text-anchor='end' font-size='12' fill='" << col << "'>" << s.label
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

int run_sweep(const RunConfig& config, const std::string& out_dir, bool plot,
              std::vector<engine::KeyRatePoint>* points_out) {
    std::filesystem::create_directories(out_dir);
    std::vector<engine::KeyRatePoint> pts =
        engine::sweep(config.scenario, config.distances(), config.engine);
    write_rates_csv(out_dir + "/rates.csv", pts, config.resolved_text());
    if (plot) {
        PlotSeries s;
        s.label = "rate";
        for (const auto& p : pts) s.points.push_back({p.distance_km, p.rate});
        write_rate_svg(out_dir + "/rates.svg", {s});
    }
    if (points_out) *points_out = pts;
    for (const auto& p : pts)
        if (p.status.rfind("error:", 0) == 0) return 3;
    return 0;
}

int run_compare(const RunConfig& a, const RunConfig& b, const std::string& out_dir) {
    std::vector<double> da = a.distances(), db = b.distances();
    if (da != db) return 2;
    std::filesystem::create_directories(out_dir);
    std::vector<engine::KeyRatePoint> pa = engine::sweep(a.scenario, da, a.engine);
    std::vector<engine::KeyRatePoint> pb = engine::sweep(b.scenario, db, b.engine);
    std::ofstream out(out_dir + "/compare.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write compare.csv");
    out << "distance_km,rate_a,rate_b,ratio\n";
    for (std::size_t i = 0; i < pa.size(); ++i) {
        double ra = pa[i].rate, rb = pb[i].rate;
        std::string ratio;
        if (ra == rb) ratio = "1";
        else if (rb > 0) ratio = format_float(ra / rb);
        else ratio = "inf";
        out << format_float(da[i]) << ',' << format_float(ra) << ','
            << format_float(rb) << ',' << ratio << "\n";
    }
    PlotSeries sa{"A", {}}, sb{"B", {}};
    for (const auto& p : pa) sa.points.push_back({p.distance_km, p.rate});
    for (const auto& p : pb) sb.points.push_back({p.distance_km, p.rate});
    write_rate_svg(out_dir + "/compare.svg", {sa, sb});
    int rc = 0;
    for (const auto& p : pa)
        if (p.status.rfind("error:", 0) == 0) rc = 3;
    for (const auto& p : pb)
        if (p.status.rfind("error:", 0) == 0) rc = 3;
    return rc;
}

}  // namespace qkd::run
