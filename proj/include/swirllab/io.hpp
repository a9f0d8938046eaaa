/// @file io.hpp
/// @brief Line-oriented configuration parsing, RFC-4180 CSV emission, exit
///        code mapping, and the report-table builders behind the driver.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "swirllab/analysis.hpp"
#include "swirllab/core.hpp"
#include "swirllab/degiorgi.hpp"
#include "swirllab/fields.hpp"
#include "swirllab/norms.hpp"

namespace swirllab::io {

// ===========================================================================
// Scalar formatting
// ===========================================================================

/// Shortest-ish deterministic decimal rendering used across all tables.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::string(buf);
}

inline std::string format_long(long v) { return std::to_string(v); }

inline std::string format_bool(bool v) { return v ? "1" : "0"; }

// ===========================================================================
// CSV emission (RFC 4180 quoting, LF line endings, UTF-8 pass-through)
// ===========================================================================

/// Quotes a field when it contains a comma, quote, or line break; embedded
/// quotes are doubled.
inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

/// A comment block, a header row, and data rows.  Comments are emitted as
/// `# ...` lines ahead of the header so a table carries its provenance
/// (resolved configuration) inside the file.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string to_csv_string(const CsvTable& t) {
    std::string out;
    for (const std::string& c : t.comments) {
        out += "# ";
        out += c;
        out += '\n';
    }
    const auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(row[i]);
        }
        out += '\n';
    };
    if (!t.header.empty()) emit_row(t.header);
    for (const auto& row : t.rows) {
        if (!t.header.empty() && row.size() != t.header.size()) {
            throw Error(ErrorCode::ConfigInvalid,
                        "row width does not match the header",
                        static_cast<long>(row.size()));
        }
        emit_row(row);
    }
    return out;
}

/// Writes content to a file, or to stdout when path is "-".
inline void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::ConfigInvalid, "cannot open for writing: " + path);
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
        throw Error(ErrorCode::ConfigInvalid, "write failed: " + path);
    }
}

// ===========================================================================
// Configuration files
// ===========================================================================

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

}  // namespace detail

/// Flat key/value store; section headers prefix keys as "section.key".
struct Config {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        const auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const {
        const std::string raw = detail::trim(values.at(key));
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (raw.empty() || end != raw.c_str() + raw.size()) {
            throw Error(ErrorCode::ConfigInvalid,
                        "not a number: " + key + "=" + raw);
        }
        return v;
    }

    long get_long(const std::string& key) const {
        const std::string raw = detail::trim(values.at(key));
        char* end = nullptr;
        const long v = std::strtol(raw.c_str(), &end, 10);
        if (raw.empty() || end != raw.c_str() + raw.size()) {
            throw Error(ErrorCode::ConfigInvalid,
                        "not an integer: " + key + "=" + raw);
        }
        return v;
    }

    bool get_bool(const std::string& key) const {
        const std::string raw = detail::lower(detail::trim(values.at(key)));
        if (raw == "1" || raw == "true" || raw == "yes" || raw == "on") {
            return true;
        }
        if (raw == "0" || raw == "false" || raw == "no" || raw == "off") {
            return false;
        }
        throw Error(ErrorCode::ConfigInvalid,
                    "not a boolean: " + key + "=" + raw);
    }

    void set(const std::string& key, const std::string& value) {
        values[key] = value;
    }
};

/// Parses line-oriented `key = value` text with `[section]` headers and
/// `#`/`;` comment lines.  Later duplicates win.  Throws ConfigInvalid with
/// the 1-based line number on malformed input.
inline Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw Error(ErrorCode::ConfigInvalid,
                            "malformed section header: " + t, lineno);
            }
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section.empty()) {
                throw Error(ErrorCode::ConfigInvalid,
                            "empty section name", lineno);
            }
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigInvalid,
                        "expected key=value: " + t, lineno);
        }
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorCode::ConfigInvalid, "empty key", lineno);
        }
        cfg.values[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

/// Loads and parses a configuration file.
inline Config load_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::ConfigInvalid, "cannot read config: " + path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

// ===========================================================================
// Exit-code policy
// ===========================================================================

/// 0 success (negative verdicts included), 1 validation, 2 numerical,
/// 64 usage.
inline int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::UnknownSubcommand:
            return 64;
        case ErrorCode::ZeroVelocityAtStart:
        case ErrorCode::StepUnderflow:
        case ErrorCode::OnAxis:
        case ErrorCode::ZeroVelocity:
        case ErrorCode::DegenerateSection:
        case ErrorCode::SingularSwirl:
        case ErrorCode::NonFiniteSample:
        case ErrorCode::DegenerateFit:
            return 2;
        default:
            return 1;
    }
}

// ===========================================================================
// Report tables
// ===========================================================================

/// Structural per-annulus table; with validate also joins the corridor
/// verdicts and margins.
inline CsvTable annulus_table(const fields::SwirlProfile& p, bool validate,
                              const fields::ValidateOptions& vopt = {}) {
    CsvTable t;
    t.header = {"j",
                "r_outer",
                "r_inner",
                "area",
                "c",
                "milestone",
                "milestone_tilde",
                "descent_feasible",
                "min_gap",
                "min_log_gap",
                "log_omega_end"};
    std::vector<fields::AnnulusVerdict> verdicts;
    if (validate) {
        const fields::ConditionReport rep = fields::validate_profile(p, vopt);
        verdicts = rep.annuli;
        t.comments.push_back("feasible_j_max=" +
                             format_long(rep.feasible_j_max));
        for (const char* col :
             {"certified", "margin_lower", "margin_upper", "margin_steep",
              "margin_budget", "band_upper_violations"}) {
            t.header.emplace_back(col);
        }
    }
    for (std::size_t i = 0; i < p.annuli.size(); ++i) {
        const fields::AnnulusInfo& a = p.annuli[i];
        std::vector<std::string> row = {
            format_long(a.j),
            format_double(a.r_outer),
            format_double(a.r_inner),
            format_double(a.area),
            format_double(a.c),
            format_double(a.S_j),
            format_double(a.S_tilde_j),
            format_bool(a.descent_feasible),
            format_double(a.min_gap),
            format_double(a.min_log_gap),
            format_double(a.log_omega_end)};
        if (validate) {
            const fields::AnnulusVerdict& v = verdicts[i];
            row.push_back(format_bool(v.certified));
            row.push_back(format_double(v.margin_lower));
            row.push_back(format_double(v.margin_upper));
            row.push_back(format_double(v.margin_steep));
            row.push_back(format_double(v.margin_budget));
            row.push_back(format_long(v.band_upper_violations));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Truncated squared-L2 energies over the nested geometric grids
/// tau_max = m ln 10 (so the cut distance is h = 10^{-m}), together with
/// the closed-form envelope pi (1 - h^{1/10}) / (1/10).
inline CsvTable truncated_energy_table(const fields::TubeField& field,
                                       int m_max, int n_r = 256,
                                       int n_theta = 8) {
    if (m_max < 1 || m_max > 8) {
        throw Error(ErrorCode::ConfigInvalid, "m_max must lie in [1, 8]");
    }
    const auto speed = [&field](Point3 q) {
        return norm(fields::evaluate_velocity(field, q));
    };
    CsvTable t;
    t.header = {"m",     "h",         "tau_max",  "n_z",
                "energy", "envelope", "increment", "envelope_increment"};
    const auto envelope = [](double h) {
        return kPi * (1.0 - std::pow(h, 0.1)) / 0.1;
    };
    double prev_energy = 0.0;
    double prev_env = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        const double tau_max = m * std::log(10.0);
        const int n_z = m * 512;
        const norms::CylGrid g = norms::make_cyl_grid_geometric_z(
            field.support_radius, n_r, n_theta, tau_max, n_z);
        const norms::NormReport rep =
            norms::lp_norm_tube(speed, 2.0, g, false);
        const double energy = rep.value * rep.value;
        const double h = std::pow(10.0, -m);
        const double env = envelope(h);
        t.rows.push_back({format_long(m), format_double(h),
                          format_double(tau_max), format_long(n_z),
                          format_double(energy), format_double(env),
                          format_double(energy - prev_energy),
                          format_double(env - prev_env)});
        prev_energy = energy;
        prev_env = env;
    }
    return t;
}

/// Per-annulus partial sums for either the swirl-decay budget integral or
/// the sixth-power direction-divergence integral.
inline CsvTable partial_sum_table(const fields::TubeField& field,
                                  norms::SumMode mode, int J,
                                  const norms::PartialSumOptions& opt = {}) {
    const norms::PartialSumReport rep =
        norms::annulus_partial_sums(field, mode, J, opt);
    CsvTable t;
    t.comments.push_back(std::string("mode=") +
                         (mode == norms::SumMode::speed_alpha ? "alpha"
                                                              : "f6"));
    t.comments.push_back("n_skipped=" + format_long(rep.n_skipped));
    t.header = {"j", "increment", "cumulative", "certified", "included"};
    for (const norms::AnnulusTerm& term : rep.terms) {
        t.rows.push_back({format_long(term.j), format_double(term.increment),
                          format_double(term.cumulative),
                          format_bool(term.certified),
                          format_bool(term.included)});
    }
    return t;
}

/// Streamline growth-rate report (one row).
inline CsvTable growth_table(const fields::TubeField& field, double L,
                             double cap,
                             const fields::GrowthOptions& opt = {}) {
    const fields::GrowthReport rep =
        fields::streamline_growth_report(field, L, cap, opt);
    CsvTable t;
    t.header = {"floor_L",      "cap",   "A_emp", "cap_exceeded",
                "n_qualifying", "sup_s", "sup_z"};
    t.rows.push_back({format_double(rep.floor_L), format_double(rep.cap),
                      format_double(rep.A_emp),
                      format_bool(rep.cap_exceeded),
                      format_long(rep.n_qualifying), format_double(rep.sup_s),
                      format_double(rep.sup_z)});
    return t;
}

/// Stage-by-stage truncation energies on both ladders.
inline CsvTable ledger_table(const degiorgi::TruncationLedger& led) {
    CsvTable t;
    t.comments.push_back("R=" + format_double(led.R));
    t.comments.push_back("beta=" + format_double(led.beta));
    t.header = {"k", "window_start", "U", "W", "domination_ratio"};
    for (int k = 0; k <= led.k_max; ++k) {
        t.rows.push_back(
            {format_long(k), format_double(degiorgi::truncation_time(k)),
             format_double(led.U[static_cast<std::size_t>(k)]),
             format_double(led.W[static_cast<std::size_t>(k)]),
             k == 0 ? std::string()
                    : format_double(
                          led.domination[static_cast<std::size_t>(k - 1)])});
    }
    return t;
}

/// Exponent-feasibility audit for one swirl exponent (single row; blank
/// witness columns when the exponent is below the admissibility threshold).
inline CsvTable feasibility_table(double alpha) {
    CsvTable t;
    t.header = {"alpha", "alpha_star", "admissible", "beta_lo", "beta_hi",
                "beta",  "p",          "delta",      "E1",      "E2",
                "E3",    "E1_limit",   "E23_limit",  "feasible"};
    const double star = analysis::alpha_star();
    const bool adm = analysis::alpha_admissible(alpha);
    std::vector<std::string> row = {format_double(alpha), format_double(star),
                                    format_bool(adm)};
    const auto witness = analysis::find_feasible(alpha);
    if (adm && witness) {
        const analysis::BetaInterval bi = analysis::beta_interval(alpha);
        const analysis::FeasibilityReport rep =
            analysis::make_feasibility_report(*witness);
        const analysis::ExponentLimits lim =
            analysis::exponent_limits(alpha, witness->beta);
        row.insert(row.end(),
                   {format_double(bi.lo), format_double(bi.hi),
                    format_double(witness->beta), format_double(witness->p),
                    format_double(witness->delta), format_double(rep.E1),
                    format_double(rep.E2), format_double(rep.E3),
                    format_double(lim.E1_limit), format_double(lim.E23_limit),
                    format_bool(rep.feasible)});
    } else {
        row.insert(row.end(), {"", "", "", "", "", "", "", "", "", "", "0"});
    }
    t.rows.push_back(std::move(row));
    return t;
}

/// Doubly-exponential recurrence trace with the closed-form seed threshold
/// and the resulting regime in the comment block.
inline CsvTable recurrence_table(double B, double beta, double a1,
                                 int k_max) {
    const double threshold = analysis::decay_threshold(B, beta);
    const analysis::RecurrenceSequence seq =
        analysis::iterate_recurrence({B, beta, a1}, k_max);
    CsvTable t;
    t.comments.push_back("B=" + format_double(B));
    t.comments.push_back("beta=" + format_double(beta));
    t.comments.push_back("a1=" + format_double(a1));
    t.comments.push_back("threshold=" + format_double(threshold));
    t.comments.push_back(std::string("regime=") +
                         (a1 < threshold ? "decay"
                          : a1 > threshold ? "growth"
                                           : "critical"));
    t.header = {"k", "log_a", "a"};
    for (std::size_t i = 0; i < seq.log_a.size(); ++i) {
        t.rows.push_back({format_long(static_cast<long>(i + 1)),
                          format_double(seq.log_a[i]),
                          format_double(seq.a[i])});
    }
    return t;
}

/// Parameters for the truncation-apparatus checks on the radial power-law
/// snapshot family.
struct CheckParams {
    std::string which = "layercake";  ///< layercake|weaklp|cheb|domination
    double alpha = 2.5;
    double gamma = 2.0;
    int n_rho = 4096;
    double R = 10.0;
    double beta = 1.1;
    int k = 2;
    double delta = 0.05;
    double q = 2.5;
    double C0 = 1.0;
    double slack = 1.05;
};

/// Runs one check and renders a single-row table with a shared schema;
/// columns that do not apply to the chosen check stay blank.  A negative
/// verdict is data, not an error.
inline CsvTable check_table(const CheckParams& cp) {
    const degiorgi::SpaceTimeField f =
        degiorgi::make_radial_snapshot_family(cp.alpha, cp.gamma, cp.n_rho);
    const std::vector<double>& s = f.speed.front();
    const double weak =
        norms::weak_lp_norm(s, f.weights, cp.alpha).value;
    const double scale_w = std::pow(cp.R, cp.beta);

    CsvTable t;
    t.header = {"which", "alpha", "gamma", "n_rho", "R",     "beta",
                "k",     "delta", "q",     "C0",    "weak",  "lhs",
                "rhs",   "ratio", "satisfied"};
    std::string delta_s, q_s, c0_s, weak_s;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
    if (cp.which == "layercake") {
        const double level =
            degiorgi::truncation_level(scale_w, cp.k - 1);
        double lc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double ex = degiorgi::truncate_excess(s[i], level);
            lc += f.weights[i] * ex * ex;
        }
        const degiorgi::BoundCheck c = degiorgi::check_layercake(
            lc, weak, cp.R, cp.alpha, cp.beta, cp.k, cp.slack);
        lhs = c.lhs;
        rhs = c.rhs;
        ok = c.satisfied;
        weak_s = format_double(weak);
    } else if (cp.which == "weaklp" || cp.which == "cheb") {
        const double W_prev =
            degiorgi::energy_U(f, scale_w, cp.k - 1).value;
        const double W_k = degiorgi::energy_U(f, scale_w, cp.k).value;
        const degiorgi::BoundCheck c =
            cp.which == "weaklp"
                ? degiorgi::check_weakLP(W_k, W_prev, weak, cp.R, cp.alpha,
                                         cp.beta, cp.delta, cp.C0)
                : degiorgi::check_cheb(W_k, W_prev, weak, cp.R, cp.alpha,
                                       cp.beta, cp.delta, cp.q, cp.k,
                                       cp.C0);
        lhs = c.lhs;
        rhs = c.rhs;
        ok = c.satisfied;
        delta_s = format_double(cp.delta);
        if (cp.which == "cheb") q_s = format_double(cp.q);
        c0_s = format_double(cp.C0);
        weak_s = format_double(weak);
    } else if (cp.which == "domination") {
        const degiorgi::DominationReport rep =
            degiorgi::check_domination(f, cp.R, cp.beta, cp.k);
        lhs = rep.max_ratio;
        rhs = rep.bound;
        ok = rep.passes;
    } else {
        throw Error(ErrorCode::ConfigInvalid,
                    "unknown check: " + cp.which +
                        " (expected layercake|weaklp|cheb|domination)");
    }
    t.rows.push_back({cp.which, format_double(cp.alpha),
                      format_double(cp.gamma), format_long(cp.n_rho),
                      format_double(cp.R), format_double(cp.beta),
                      format_long(cp.k), delta_s, q_s, c0_s, weak_s,
                      format_double(lhs), format_double(rhs),
                      format_double(rhs > 0.0 ? lhs / rhs : 0.0),
                      format_bool(ok)});
    return t;
}

}  // namespace swirllab::io
