#include "einselect/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "einselect/csv.hpp"
#include "einselect/error.hpp"

namespace einselect {

EngineKind parse_engine_kind(const std::string& s) {
    if (s == "qbm") return EngineKind::qbm;
    if (s == "channels") return EngineKind::channels;
    if (s == "secular") return EngineKind::secular;
    fail(ErrorCategory::config, "unknown engine '" + s + "' (expected qbm|channels|secular)");
}

std::string to_string(EngineKind e) {
    switch (e) {
        case EngineKind::qbm: return "qbm";
        case EngineKind::channels: return "channels";
        case EngineKind::secular: return "secular";
    }
    return "?";
}

CandidateParams InitialSpec::params() const {
    CandidateParams p;
    p.kind = kind;
    p.n = n;
    p.m = m;
    p.phase = phase;
    p.alpha = cplx(alpha_re, alpha_im);
    p.r = r;
    p.theta = theta;
    return p;
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& expected, const std::string& got) {
    fail(ErrorCategory::config, key + ": expected " + expected + ", got '" + got + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

bool parse_plain_number(const std::string& s, double& v) {
    if (s == "pi") {
        v = kPi;
        return true;
    }
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && ptr == e;
}

// number, `pi`, or a product/quotient chain of them such as 2*pi/200
double parse_real(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) bad_value(key, "real number", raw);
    double acc = 0.0;
    char op = '*';
    bool first = true;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find_first_of("*/", pos);
        // an exponent sign such as 1e-5 is not an operator; only * and / are
        const std::string tok = trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        double v = 0.0;
        if (!parse_plain_number(tok, v)) bad_value(key, "real number (optionally with *pi, /n)", raw);
        if (first) {
            acc = v;
            first = false;
        } else if (op == '*') {
            acc *= v;
        } else {
            if (v == 0.0) bad_value(key, "nonzero divisor", raw);
            acc /= v;
        }
        if (next == std::string::npos) break;
        op = s[next];
        pos = next + 1;
    }
    if (!std::isfinite(acc)) bad_value(key, "finite real number", raw);
    return acc;
}

int parse_int(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) bad_value(key, "integer", raw);
    return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    bad_value(key, "boolean (true|false)", raw);
}

std::vector<double> parse_real_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    for (const auto& t : split(raw, ',')) out.push_back(parse_real(key, t));
    return out;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& key, const std::string& raw) {
    std::vector<std::pair<int, int>> out;
    for (const auto& t : split(raw, ',')) {
        const auto parts = split(t, '-');
        if (parts.size() != 2) bad_value(key, "list of index pairs like 0-1", raw);
        out.emplace_back(parse_int(key, parts[0]), parse_int(key, parts[1]));
    }
    return out;
}

std::string fmt(double v) { return format_double(v); }

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

std::string fmt_pairs(const std::vector<std::pair<int, int>>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + std::to_string(v[i].first) + "-" + std::to_string(v[i].second);
    return s;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

// enum parsers throw config errors without the key; add it
template <class F>
auto with_key(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        fail(ErrorCategory::config, key + ": " + e.what());
    }
}

struct Field {
    std::string key;
    std::string type;
    std::function<void(Scenario&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

#define REAL(k, member) \
    Field{k, "real", [](Scenario& s, const std::string& v) { s.member = parse_real(k, v); }, \
          [](const Scenario& s) { return fmt(s.member); }}
#define INT(k, member) \
    Field{k, "integer", [](Scenario& s, const std::string& v) { s.member = parse_int(k, v); }, \
          [](const Scenario& s) { return std::to_string(s.member); }}
#define BOOL(k, member) \
    Field{k, "boolean", [](Scenario& s, const std::string& v) { s.member = parse_bool(k, v); }, \
          [](const Scenario& s) { return fmt_bool(s.member); }}
#define REALS(k, member) \
    Field{k, "list of reals", [](Scenario& s, const std::string& v) { s.member = parse_real_list(k, v); }, \
          [](const Scenario& s) { return fmt_list(s.member); }}
#define PAIRS(k, member) \
    Field{k, "list of index pairs", [](Scenario& s, const std::string& v) { s.member = parse_pairs(k, v); }, \
          [](const Scenario& s) { return fmt_pairs(s.member); }}
#define ENUM(k, member, parser, choices) \
    Field{k, choices, \
          [](Scenario& s, const std::string& v) { s.member = with_key(k, [&] { return parser(trim(v)); }); }, \
          [](const Scenario& s) { return to_string(s.member); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        REAL("system.mass", system.mass),
        REAL("system.frequency", system.frequency),
        INT("system.fock_dim", system.fock_dim),

        INT("bath.spatial_dim", bath.spatial_dim),
        REAL("bath.coupling", bath.coupling),
        REAL("bath.temperature", bath.temperature),
        REAL("bath.field_mass", bath.field_mass),
        ENUM("bath.window", bath.window, parse_window_kind, "exponential|gaussian|sharp"),
        REAL("bath.cutoff", bath.cutoff),
        REAL("bath.k_max", bath.k_max),
        INT("bath.n_k", bath.n_k),

        REAL("kernels.dt", kernel_dt),
        REAL("kernels.t_max", kernel_t_max),

        ENUM("solver.engine", engine, parse_engine_kind, "qbm|channels|secular"),
        REAL("solver.t_max", solver.t_max),
        REAL("solver.dt", solver.dt),
        INT("solver.record_stride", solver.record_stride),
        REAL("solver.trace_tol", solver.trace_tol),
        REAL("solver.truncation_tol", solver.truncation_tol),
        INT("solver.min_steps_per_period", solver.min_steps_per_period),
        ENUM("solver.anomalous_sign", solver.anomalous_sign, parse_anomalous_sign, "plus|minus"),
        BOOL("solver.include_cross", include_cross),
        ENUM("solver.cross_index", cross_index, parse_b_index, "nl|ln|ml"),

        ENUM("initial.kind", initial.kind, parse_family_kind,
             "number_states|coherent_grid|two_state_superpositions|squeezed_grid"),
        INT("initial.n", initial.n),
        INT("initial.m", initial.m),
        REAL("initial.phase", initial.phase),
        REAL("initial.alpha_re", initial.alpha_re),
        REAL("initial.alpha_im", initial.alpha_im),
        REAL("initial.r", initial.r),
        REAL("initial.theta", initial.theta),

        Field{"sieve.families", "list of family kinds",
              [](Scenario& s, const std::string& v) {
                  s.sieve.families.clear();
                  for (const auto& t : split(v, ','))
                      s.sieve.families.push_back(with_key("sieve.families", [&] { return parse_family_kind(t); }));
              },
              [](const Scenario& s) {
                  std::string out;
                  for (std::size_t i = 0; i < s.sieve.families.size(); ++i)
                      out += (i ? ", " : "") + to_string(s.sieve.families[i]);
                  return out;
              }},
        INT("sieve.n_max", sieve.n_max),
        REALS("sieve.alpha_re", sieve.alpha_re),
        REALS("sieve.alpha_im", sieve.alpha_im),
        BOOL("sieve.energy_matched", sieve.energy_matched),
        PAIRS("sieve.pairs", sieve.pairs),
        REALS("sieve.phases", sieve.phases),
        REALS("sieve.squeeze_r", sieve.squeeze_r),
        REALS("sieve.squeeze_theta", sieve.squeeze_theta),
        REALS("sieve.checkpoints", sieve.checkpoints),
        ENUM("sieve.measure", sieve.measure, parse_entropy_measure, "linear|von_neumann"),
        REAL("sieve.tie_tol", sieve.tie_tol),
        INT("sieve.workers", sieve.workers),
        Field{"sieve.minimize", "none|coherent|squeezed",
              [](Scenario& s, const std::string& v) {
                  const std::string t = trim(v);
                  if (t != "none" && t != "coherent" && t != "squeezed")
                      bad_value("sieve.minimize", "none|coherent|squeezed", v);
                  s.sieve.minimize = t;
              },
              [](const Scenario& s) { return s.sieve.minimize; }},
        REAL("sieve.t_star", sieve.t_star),
        REAL("sieve.minimize_bound", sieve.minimize_bound),
        INT("sieve.grid_points", sieve.grid_points),
        INT("sieve.max_evaluations", sieve.max_evaluations),

        INT("oracle.system_dim", oracle.system_dim),
        REALS("oracle.omegas", oracle.omegas),
        REALS("oracle.g", oracle.g),
        REALS("oracle.k", oracle.k),
        INT("oracle.truncation", oracle.truncation),
        ENUM("oracle.coupling_form", oracle.form, parse_coupling_form, "linear|exponential"),
        REAL("oracle.e0", oracle.e0),
        INT("oracle.levels", oracle.levels),
        REAL("oracle.t_star", oracle.t_star),
        REAL("oracle.temperature", oracle.temperature),
        REAL("oracle.alpha", oracle.alpha),
        INT("oracle.steps", oracle.steps),

        Field{"output.dir", "path", [](Scenario& s, const std::string& v) { s.output.dir = trim(v); },
              [](const Scenario& s) { return s.output.dir; }},
        PAIRS("output.elements", output.elements),
        BOOL("output.plots", output.plots),

        Field{"seal.rng", "none",
              [](Scenario& s, const std::string& v) { s.rng_seal = trim(v); },
              [](const Scenario& s) { return s.rng_seal; }},
    };
    return f;
}

#undef REAL
#undef INT
#undef BOOL
#undef REALS
#undef PAIRS
#undef ENUM

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string closest_key(const std::string& key) {
    std::string best;
    std::size_t best_d = 3;
    for (const auto& f : fields()) {
        const std::size_t d = edit_distance(key, f.key);
        if (d < best_d) {
            best_d = d;
            best = f.key;
        }
    }
    return best;
}

bool is_multiple(double t, double dt) {
    const double r = t / dt;
    return std::abs(r - std::round(r)) <= 1e-6;
}

[[noreturn]] void inconsistent(const std::string& msg) { fail(ErrorCategory::config, msg); }

void resolve_and_validate(Scenario& s, const std::set<std::string>& given) {
    auto has = [&](const char* k) { return given.count(k) > 0; };
    // module validators raise invalid_argument; surface them as config errors
    with_key("system", [&] { s.system.validate(); return 0; });

    if (!has("bath.k_max") || s.bath.k_max == 0.0) s.bath.k_max = 8.0 * s.bath.cutoff;
    with_key("bath", [&] { s.bath.validate(); return 0; });

    if (!(s.solver.dt > 0.0)) inconsistent("solver.dt must be positive");
    if (!(s.solver.t_max > 0.0)) inconsistent("solver.t_max must be positive");
    if (!is_multiple(s.solver.t_max, s.solver.dt)) inconsistent("solver.t_max must be a multiple of solver.dt");
    if (s.solver.record_stride < 1) inconsistent("solver.record_stride must be at least 1");
    if (s.solver.min_steps_per_period < 1) inconsistent("solver.min_steps_per_period must be at least 1");

    if (!has("kernels.dt")) s.kernel_dt = 0.5 * s.solver.dt;
    if (!has("kernels.t_max")) s.kernel_t_max = s.solver.t_max;
    if (!(s.kernel_dt > 0.0)) inconsistent("kernels.dt must be positive");
    if (!is_multiple(s.kernel_t_max, s.kernel_dt)) inconsistent("kernels.t_max must be a multiple of kernels.dt");
    if (s.solver.t_max > s.kernel_t_max * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "solver.t_max = " << fmt(s.solver.t_max) << " exceeds kernels.t_max = " << fmt(s.kernel_t_max)
           << "; the kernel grid must cover the solver horizon";
        inconsistent(os.str());
    }

    const int d = s.system.fock_dim;
    if (s.initial.kind == FamilyKind::two_state_superpositions &&
        (s.initial.n == s.initial.m || s.initial.n < 0 || s.initial.m < 0 || s.initial.n >= d || s.initial.m >= d))
        inconsistent("initial.n and initial.m must be distinct levels below system.fock_dim");
    if (s.initial.kind == FamilyKind::number_states && (s.initial.n < 0 || s.initial.n >= d))
        inconsistent("initial.n must lie below system.fock_dim");

    if (s.sieve.families.empty()) inconsistent("sieve.families must not be empty");
    if (s.sieve.n_max < 0 || s.sieve.n_max >= d) inconsistent("sieve.n_max must lie below system.fock_dim");
    for (auto [n, m] : s.sieve.pairs)
        if (n < 0 || m < 0 || n >= d || m >= d || n == m)
            inconsistent("sieve.pairs must name distinct levels below system.fock_dim");
    if (!has("sieve.checkpoints")) {
        s.sieve.checkpoints.clear();
        const double T = s.system.bohr_period();
        for (int k = 1; k <= 5 && k * T <= s.solver.t_max * (1.0 + 1e-12); ++k) s.sieve.checkpoints.push_back(k * T);
        if (s.sieve.checkpoints.empty()) s.sieve.checkpoints.push_back(s.solver.t_max);
    }
    if (s.sieve.checkpoints.empty()) inconsistent("sieve.checkpoints must not be empty");
    for (double c : s.sieve.checkpoints)
        if (c < 0.0 || c > s.solver.t_max * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "sieve.checkpoints entry " << fmt(c) << " lies outside [0, solver.t_max = " << fmt(s.solver.t_max)
               << "]";
            inconsistent(os.str());
        }
    if (!has("sieve.t_star")) s.sieve.t_star = s.solver.t_max;
    if (!(s.sieve.t_star > 0.0) || s.sieve.t_star > s.solver.t_max * (1.0 + 1e-12))
        inconsistent("sieve.t_star must lie in (0, solver.t_max]");
    if (!(s.sieve.tie_tol >= 0.0)) inconsistent("sieve.tie_tol must be non-negative");
    if (s.sieve.workers < 0) inconsistent("sieve.workers must be non-negative");
    if (!(s.sieve.minimize_bound > 0.0)) inconsistent("sieve.minimize_bound must be positive");
    if (s.sieve.grid_points < 2) inconsistent("sieve.grid_points must be at least 2");
    if (s.sieve.max_evaluations < 1) inconsistent("sieve.max_evaluations must be at least 1");

    const auto& o = s.oracle;
    if (o.omegas.empty()) inconsistent("oracle.omegas must not be empty");
    if (o.g.size() != o.omegas.size()) inconsistent("oracle.g must have one entry per oracle.omegas entry");
    if (o.k.size() != o.omegas.size()) inconsistent("oracle.k must have one entry per oracle.omegas entry");
    if (o.system_dim < 2) inconsistent("oracle.system_dim must be at least 2");
    if (o.truncation < 1) inconsistent("oracle.truncation must be at least 1");
    if (o.levels < 1) inconsistent("oracle.levels must be at least 1");
    if (o.steps < 1) inconsistent("oracle.steps must be at least 1");
    if (!(o.t_star > 0.0)) inconsistent("oracle.t_star must be positive");
    if (!(o.temperature >= 0.0)) inconsistent("oracle.temperature must be non-negative");

    for (auto [n, m] : s.output.elements)
        if (n < 0 || m < 0 || n >= d || m >= d) inconsistent("output.elements must index levels below system.fock_dim");
    if (s.output.dir.empty()) inconsistent("output.dir must not be empty");
    if (s.rng_seal != "none")
        inconsistent("seal.rng: the pipeline is deterministic and accepts only 'none', got '" + s.rng_seal + "'");
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    std::map<std::string, const Field*> index;
    for (const auto& f : fields()) index[f.key] = &f;

    Scenario s;
    std::set<std::string> given;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCategory::config, "line " + std::to_string(lineno) + ": expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = index.find(key);
        if (it == index.end()) {
            std::string msg = "unknown key '" + key + "' (line " + std::to_string(lineno) + ")";
            const std::string near = closest_key(key);
            if (!near.empty()) msg += "; did you mean '" + near + "'?";
            fail(ErrorCategory::config, msg);
        }
        if (!given.insert(key).second)
            fail(ErrorCategory::config, "duplicate key '" + key + "' (line " + std::to_string(lineno) + ")");
        it->second->set(s, value);
    }
    resolve_and_validate(s, given);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::config, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "# resolved scenario: every key with its effective value\n";
    std::string section;
    for (const auto& f : fields()) {
        const std::string sec = f.key.substr(0, f.key.find('.'));
        if (sec != section) {
            os << (section.empty() ? "" : "\n") << "# " << sec << "\n";
            section = sec;
        }
        os << f.key << " = " << f.get(s) << "\n";
    }
    return os.str();
}

std::vector<std::pair<std::string, std::string>> scenario_keys() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.type);
    return out;
}

} // namespace einselect
