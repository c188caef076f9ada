#include "mark0/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mark0 {

std::string to_string(Profile p) { return p == Profile::Desk ? "desk" : "full"; }

Profile profile_from_string(const std::string& s) {
    if (s == "desk") return Profile::Desk;
    if (s == "full") return Profile::Full;
    throw ConfigError("unknown profile '" + s + "' (expected desk or full)");
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long i = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (...) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    return static_cast<int>(to_long(key, v));
}

// "0.1,0.2,0.3" or "0.1:0.7:0.05" (inclusive range)
std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    const auto range = split(v, ':');
    if (range.size() == 3) {
        const double a = to_double(key, range[0]);
        const double b = to_double(key, range[1]);
        const double step = to_double(key, range[2]);
        if (step <= 0.0) throw ConfigError("key '" + key + "': range step must be > 0");
        for (int i = 0;; ++i) {
            const double x = a + i * step;
            if (x > b + 1e-12) break;
            out.push_back(x);
        }
        return out;
    }
    for (const auto& item : split(v, ',')) {
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

// "0:6" or "0:3,7:10"
std::vector<LockdownWindow> parse_windows(const std::string& key, const std::string& v) {
    std::vector<LockdownWindow> out;
    for (const auto& item : split(v, ',')) {
        if (item.empty()) continue;
        const auto parts = split(item, ':');
        if (parts.size() != 2) {
            throw ConfigError("key '" + key + "': window must be start:end, got '" + item + "'");
        }
        out.push_back({to_int(key, parts[0]), to_int(key, parts[1])});
    }
    return out;
}

struct RawConfig {
    // section -> key -> value, with duplicate keys rejected at parse time
    std::map<std::string, std::map<std::string, std::string>> sections;
};

RawConfig tokenize(const std::string& text) {
    static const std::set<std::string> known_sections = {"params", "shock", "policy", "run",
                                                         "grid"};
    RawConfig raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections.contains(section)) {
                throw ConfigError("unknown section [" + section + "]");
            }
            raw.sections[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        auto [it, inserted] = raw.sections[section].emplace(key, value);
        if (!inserted) throw ConfigError("duplicate key '" + key + "' in [" + section + "]");
    }
    return raw;
}

// consume-tracking view over one section
class Section {
  public:
    Section(RawConfig& raw, const std::string& name) : name_(name) {
        auto it = raw.sections.find(name);
        if (it != raw.sections.end()) entries_ = &it->second;
    }

    bool present() const { return entries_ != nullptr; }

    std::optional<std::string> take(const std::string& key) {
        if (!entries_) return std::nullopt;
        auto it = entries_->find(key);
        if (it == entries_->end()) return std::nullopt;
        consumed_.insert(key);
        return it->second;
    }

    void finish() const {
        if (!entries_) return;
        for (const auto& [key, value] : *entries_) {
            if (!consumed_.contains(key)) {
                throw ConfigError("unknown key '" + key + "' in [" + name_ + "]");
            }
        }
    }

  private:
    std::string name_;
    std::map<std::string, std::string>* entries_ = nullptr;
    std::set<std::string> consumed_;
};

void take_double(Section& s, const std::string& key, double& target) {
    if (auto v = s.take(key)) target = to_double(key, *v);
}
void take_int(Section& s, const std::string& key, int& target) {
    if (auto v = s.take(key)) target = to_int(key, *v);
}

}  // namespace

std::vector<std::uint64_t> parse_seed_spec(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const long a = to_long("seeds", trim(text.substr(0, dots)));
        const long b = to_long("seeds", trim(text.substr(dots + 2)));
        if (a < 0 || b < a) throw ConfigError("seed range must be A..B with 0 <= A <= B");
        if (b - a + 1 > 1000000) throw ConfigError("seed range too large");
        for (long s = a; s <= b; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        return seeds;
    }
    for (const auto& item : split(text, ',')) {
        if (item.empty()) continue;
        const long s = to_long("seeds", item);
        if (s < 0) throw ConfigError("seeds must be non-negative");
        seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (seeds.empty()) throw ConfigError("empty seed list");
    return seeds;
}

ResolvedConfig parse_config_text(const std::string& text, Profile profile) {
    RawConfig raw = tokenize(text);
    ResolvedConfig cfg;
    cfg.profile = profile;

    Section params(raw, "params");
    bool n_firms_set = false;
    if (auto v = params.take("n_firms")) {
        cfg.params.n_firms = to_int("n_firms", *v);
        n_firms_set = true;
    }
    take_double(params, "c0", cfg.params.c0);
    take_double(params, "beta", cfg.params.beta);
    take_double(params, "price_adjust", cfg.params.price_adjust);
    take_double(params, "eta0_minus", cfg.params.eta0_minus);
    take_double(params, "hire_fire_ratio", cfg.params.hire_fire_ratio);
    take_double(params, "dividend_share", cfg.params.dividend_share);
    take_double(params, "theta", cfg.params.theta);
    take_double(params, "revival_rate", cfg.params.revival_rate);
    take_double(params, "zeta", cfg.params.zeta);
    take_double(params, "gamma0", cfg.params.gamma0);
    take_double(params, "omega", cfg.params.omega);
    take_double(params, "alpha_c", cfg.params.alpha_c);
    take_double(params, "alpha_gamma", cfg.params.alpha_gamma);
    take_double(params, "tau_r", cfg.params.tau_r);
    take_double(params, "tau_t", cfg.params.tau_t);
    take_double(params, "loss_share", cfg.params.loss_share);
    take_double(params, "wage_indexation", cfg.params.wage_indexation);
    take_double(params, "rho_star", cfg.params.rho_star);
    take_double(params, "phi_pi", cfg.params.phi_pi);
    take_double(params, "pi_star", cfg.params.pi_star);
    if (auto v = params.take("demand_softmax")) {
        if (*v == "normalized") {
            cfg.params.demand_price_normalized = true;
        } else if (*v == "raw") {
            cfg.params.demand_price_normalized = false;
        } else {
            throw ConfigError("demand_softmax must be 'normalized' or 'raw'");
        }
    }
    params.finish();
    if (!n_firms_set) cfg.params.n_firms = profile == Profile::Desk ? 1000 : 10000;

    Section shock(raw, "shock");
    if (shock.present()) {
        if (auto v = shock.take("windows")) cfg.shock.windows = parse_windows("windows", *v);
        take_double(shock, "dc_rel", cfg.shock.dc_rel);
        take_double(shock, "dzeta_rel", cfg.shock.dzeta_rel);
        take_int(shock, "recovery_ramp", cfg.shock.recovery_ramp);
        shock.finish();
        cfg.has_shock = !cfg.shock.windows.empty();
    }

    Section policy(raw, "policy");
    cfg.policy.theta_baseline = cfg.params.theta;
    if (policy.present()) {
        if (auto v = policy.take("credit")) {
            if (*v == "none") {
                cfg.policy.credit = CreditPolicy::None;
            } else if (*v == "naive") {
                cfg.policy.credit = CreditPolicy::Naive;
            } else if (*v == "adaptive") {
                cfg.policy.credit = CreditPolicy::Adaptive;
            } else {
                throw ConfigError("credit must be none, naive or adaptive");
            }
        }
        take_double(policy, "theta_offset", cfg.policy.theta_offset);
        if (auto v = policy.take("helicopter_kappa")) {
            cfg.policy.helicopter_kappa = to_double("helicopter_kappa", *v);
            if (*cfg.policy.helicopter_kappa <= 1.0) {
                throw ConfigError("helicopter_kappa must be > 1");
            }
        }
        if (auto v = policy.take("helicopter_time")) {
            cfg.policy.helicopter_time = to_int("helicopter_time", *v);
        }
        policy.finish();
    }
    if (cfg.policy.helicopter_time && !cfg.policy.helicopter_kappa) {
        throw ConfigError("helicopter_time given without helicopter_kappa");
    }

    Section run(raw, "run");
    if (run.present()) {
        take_int(run, "warmup", cfg.run.warmup);
        take_int(run, "horizon", cfg.run.horizon);
        const auto seed = run.take("seed");
        const auto seeds = run.take("seeds");
        if (seed && seeds) throw ConfigError("give either 'seed' or 'seeds', not both");
        if (seed) cfg.run.seeds = parse_seed_spec(*seed);
        if (seeds) cfg.run.seeds = parse_seed_spec(*seeds);
        if (auto v = run.take("out")) cfg.run.out_dir = *v;
        take_int(run, "threads", cfg.run.threads);
        take_double(run, "recovered_level", cfg.thresholds.recovered_level);
        take_int(run, "sustain_months", cfg.thresholds.sustain_months);
        take_int(run, "v_months", cfg.thresholds.v_months);
        take_double(run, "relapse_level", cfg.thresholds.relapse_level);
        run.finish();
    }
    if (cfg.run.warmup < 0) throw ConfigError("warmup must be >= 0");
    if (cfg.run.horizon < 1) throw ConfigError("horizon must be >= 1");

    Section grid(raw, "grid");
    if (grid.present()) {
        GridSettings g;
        if (auto v = grid.take("dc_values")) g.dc_values = parse_double_list("dc_values", *v);
        if (auto v = grid.take("dzeta_values")) {
            g.dzeta_values = parse_double_list("dzeta_values", *v);
        }
        take_int(grid, "shock_length", g.shock_length);
        take_int(grid, "runs_per_cell", g.runs_per_cell);
        grid.finish();
        if (g.dc_values.empty() || g.dzeta_values.empty()) {
            throw ConfigError("[grid] needs dc_values and dzeta_values");
        }
        if (g.runs_per_cell == 0) g.runs_per_cell = profile == Profile::Desk ? 100 : 500;
        if (g.shock_length < 1) throw ConfigError("shock_length must be >= 1");
        for (double v : g.dc_values) {
            if (v < 0.0 || v >= 1.0) throw ConfigError("dc_values must be in [0, 1)");
        }
        for (double v : g.dzeta_values) {
            if (v < 0.0 || v >= 1.0) throw ConfigError("dzeta_values must be in [0, 1)");
        }
        cfg.grid = g;
    }
    if (cfg.grid && cfg.has_shock) {
        throw ConfigError("a sweep defines its shock in [grid]; remove the [shock] section");
    }

    cfg.params.validate();
    if (cfg.has_shock) cfg.shock.validate();
    if (cfg.policy.theta_offset <= 0.0) throw ConfigError("theta_offset must be > 0");
    if (cfg.thresholds.recovered_level <= 0.0 || cfg.thresholds.recovered_level > 1.0 ||
        cfg.thresholds.relapse_level <= 0.0 ||
        cfg.thresholds.relapse_level > cfg.thresholds.recovered_level ||
        cfg.thresholds.sustain_months < 1 || cfg.thresholds.v_months < 0) {
        throw ConfigError("invalid shape classifier thresholds");
    }
    return cfg;
}

ResolvedConfig load_config_file(const std::string& path, Profile profile) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), profile);
}

namespace {

std::string render_seeds(const std::vector<std::uint64_t>& seeds) {
    // contiguous ranges render as A..B
    bool contiguous = seeds.size() > 1;
    for (std::size_t i = 1; i < seeds.size() && contiguous; ++i) {
        contiguous = seeds[i] == seeds[i - 1] + 1;
    }
    if (contiguous) {
        return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
    }
    std::string out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(seeds[i]);
    }
    return out;
}

std::string render_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_double(xs[i]);
    }
    return out;
}

}  // namespace

std::string render_config_ini(const ResolvedConfig& cfg) {
    std::ostringstream out;
    const auto& p = cfg.params;
    out << "[params]\n";
    out << "n_firms = " << p.n_firms << "\n";
    out << "c0 = " << format_double(p.c0) << "\n";
    out << "beta = " << format_double(p.beta) << "\n";
    out << "price_adjust = " << format_double(p.price_adjust) << "\n";
    out << "eta0_minus = " << format_double(p.eta0_minus) << "\n";
    out << "hire_fire_ratio = " << format_double(p.hire_fire_ratio) << "\n";
    out << "dividend_share = " << format_double(p.dividend_share) << "\n";
    out << "theta = " << format_double(p.theta) << "\n";
    out << "revival_rate = " << format_double(p.revival_rate) << "\n";
    out << "zeta = " << format_double(p.zeta) << "\n";
    out << "gamma0 = " << format_double(p.gamma0) << "\n";
    out << "omega = " << format_double(p.omega) << "\n";
    out << "alpha_c = " << format_double(p.alpha_c) << "\n";
    out << "alpha_gamma = " << format_double(p.alpha_gamma) << "\n";
    out << "tau_r = " << format_double(p.tau_r) << "\n";
    out << "tau_t = " << format_double(p.tau_t) << "\n";
    out << "loss_share = " << format_double(p.loss_share) << "\n";
    out << "wage_indexation = " << format_double(p.wage_indexation) << "\n";
    out << "rho_star = " << format_double(p.rho_star) << "\n";
    out << "phi_pi = " << format_double(p.phi_pi) << "\n";
    out << "pi_star = " << format_double(p.pi_star) << "\n";
    out << "demand_softmax = " << (p.demand_price_normalized ? "normalized" : "raw") << "\n";

    if (cfg.has_shock) {
        out << "\n[shock]\n";
        out << "windows = ";
        for (std::size_t i = 0; i < cfg.shock.windows.size(); ++i) {
            if (i) out << ",";
            out << cfg.shock.windows[i].start << ":" << cfg.shock.windows[i].end;
        }
        out << "\n";
        out << "dc_rel = " << format_double(cfg.shock.dc_rel) << "\n";
        out << "dzeta_rel = " << format_double(cfg.shock.dzeta_rel) << "\n";
        out << "recovery_ramp = " << cfg.shock.recovery_ramp << "\n";
    }

    out << "\n[policy]\n";
    const char* credit = cfg.policy.credit == CreditPolicy::None     ? "none"
                         : cfg.policy.credit == CreditPolicy::Naive ? "naive"
                                                                    : "adaptive";
    out << "credit = " << credit << "\n";
    out << "theta_offset = " << format_double(cfg.policy.theta_offset) << "\n";
    if (cfg.policy.helicopter_kappa) {
        out << "helicopter_kappa = " << format_double(*cfg.policy.helicopter_kappa) << "\n";
    }
    if (cfg.policy.helicopter_time) {
        out << "helicopter_time = " << *cfg.policy.helicopter_time << "\n";
    }

    out << "\n[run]\n";
    out << "warmup = " << cfg.run.warmup << "\n";
    out << "horizon = " << cfg.run.horizon << "\n";
    out << "seeds = " << render_seeds(cfg.run.seeds) << "\n";
    if (!cfg.run.out_dir.empty()) out << "out = " << cfg.run.out_dir << "\n";
    out << "threads = " << cfg.run.threads << "\n";
    out << "recovered_level = " << format_double(cfg.thresholds.recovered_level) << "\n";
    out << "sustain_months = " << cfg.thresholds.sustain_months << "\n";
    out << "v_months = " << cfg.thresholds.v_months << "\n";
    out << "relapse_level = " << format_double(cfg.thresholds.relapse_level) << "\n";

    if (cfg.grid) {
        out << "\n[grid]\n";
        out << "dc_values = " << render_list(cfg.grid->dc_values) << "\n";
        out << "dzeta_values = " << render_list(cfg.grid->dzeta_values) << "\n";
        out << "shock_length = " << cfg.grid->shock_length << "\n";
        out << "runs_per_cell = " << cfg.grid->runs_per_cell << "\n";
    }
    return out.str();
}

}  // namespace mark0
