/// @file swirllab_cli.cpp
/// @brief Command-line driver: builds the swirl tube field, reports its norm
///        dichotomies and growth rates, runs the truncation-energy
///        apparatus, and does the exponent arithmetic.  All subcommands
///        emit CSV with the resolved configuration in the comment header.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "swirllab/io.hpp"

namespace {

using swirllab::Error;
using swirllab::ErrorCode;
namespace io = swirllab::io;
namespace fields = swirllab::fields;
namespace norms = swirllab::norms;
namespace degiorgi = swirllab::degiorgi;

// ---------------------------------------------------------------------------
// Option plumbing shared by every leaf subcommand
// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string config_path;
    std::string out = "-";
    long threads = 0;  // 0 = take config / environment / default 1
    CLI::Option* config_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    c.config_opt = cmd->add_option("--config", c.config_path,
                                   "line-oriented key=value config file");
    c.out_opt = cmd->add_option("--out", c.out,
                                "output path ('-' for stdout)");
    c.threads_opt =
        cmd->add_option("--threads", c.threads,
                        "worker count (reserved; results are deterministic "
                        "and independent of it)");
}

/// Merges command line over config file over defaults, recording every
/// resolved value for the CSV comment header.  Flag > [section].key >
/// bare key > built-in default.
struct Resolver {
    io::Config cfg;
    std::string section;
    std::vector<std::pair<std::string, std::string>> resolved;

    bool lookup(const std::string& name, std::string* out_key) const {
        const std::string qualified = section + "." + name;
        if (cfg.has(qualified)) {
            *out_key = qualified;
            return true;
        }
        if (cfg.has(name)) {
            *out_key = name;
            return true;
        }
        return false;
    }

    double num(const CLI::Option* opt, double cli_val,
               const std::string& name) {
        double v = cli_val;
        std::string key;
        if ((!opt || opt->count() == 0) && lookup(name, &key)) {
            v = cfg.get_double(key);
        }
        resolved.emplace_back(name, io::format_double(v));
        return v;
    }

    long integer(const CLI::Option* opt, long cli_val,
                 const std::string& name) {
        long v = cli_val;
        std::string key;
        if ((!opt || opt->count() == 0) && lookup(name, &key)) {
            v = cfg.get_long(key);
        }
        resolved.emplace_back(name, io::format_long(v));
        return v;
    }

    std::string str(const CLI::Option* opt, std::string cli_val,
                    const std::string& name) {
        std::string v = std::move(cli_val);
        std::string key;
        if ((!opt || opt->count() == 0) && lookup(name, &key)) {
            v = cfg.get(key, v);
        }
        resolved.emplace_back(name, v);
        return v;
    }

    bool flag(const CLI::Option* opt, bool cli_val, const std::string& name) {
        bool v = cli_val;
        std::string key;
        if ((!opt || opt->count() == 0) && lookup(name, &key)) {
            v = cfg.get_bool(key);
        }
        resolved.emplace_back(name, io::format_bool(v));
        return v;
    }
};

/// Loads the config file (if any) and pins the thread count from the flag,
/// the config, or SWIRLLAB_THREADS, in that order.
Resolver make_resolver(const CommonOpts& c, const std::string& section) {
    Resolver r;
    r.section = section;
    if (!c.config_path.empty()) r.cfg = io::load_config_file(c.config_path);
    long threads = c.threads;
    if (c.threads_opt->count() == 0) {
        std::string key;
        if (r.lookup("threads", &key)) {
            threads = r.cfg.get_long(key);
        } else if (const char* env = std::getenv("SWIRLLAB_THREADS")) {
            char* end = nullptr;
            threads = std::strtol(env, &end, 10);
            if (*env == '\0' || (end && *end != '\0')) {
                throw Error(ErrorCode::ConfigInvalid,
                            std::string("SWIRLLAB_THREADS is not an "
                                        "integer: ") +
                                env);
            }
        } else {
            threads = 1;
        }
    }
    if (threads < 1) {
        throw Error(ErrorCode::ConfigInvalid, "threads must be >= 1");
    }
    r.resolved.emplace_back("threads", io::format_long(threads));
    return r;
}

/// Prepends the subcommand name and the sorted resolved configuration to
/// the table's comment block, then writes it out.  Comment lines the table
/// already carries (provenance the builders record themselves) are not
/// repeated.
void emit(const CommonOpts& c, Resolver& r, const std::string& name,
          io::CsvTable table) {
    std::vector<std::string> comments;
    std::set<std::string> seen;
    const auto push = [&](const std::string& line) {
        if (seen.insert(line).second) comments.push_back(line);
    };
    push("swirllab " + name);
    std::sort(r.resolved.begin(), r.resolved.end());
    for (const auto& [k, v] : r.resolved) push(k + "=" + v);
    for (const std::string& line : table.comments) push(line);
    table.comments = std::move(comments);
    io::write_output(c.out, io::to_csv_string(table));
}

fields::FluxShape parse_flux(const std::string& s) {
    if (s == "rolloff") return fields::FluxShape::rolloff;
    if (s == "constant") return fields::FluxShape::constant;
    throw Error(ErrorCode::ConfigInvalid,
                "flux must be rolloff or constant, got " + s);
}

// ---------------------------------------------------------------------------
// Leaf subcommands
// ---------------------------------------------------------------------------

struct BuildArgs {
    CommonOpts common;
    double alpha = 2.5, epsilon = 0.05, margin = 0.05, budget = 1.0;
    double band_fraction = 0.025;
    long j_max = 8, samples_per_window = 256, n_radii = 8;
    bool validate = false;
    CLI::Option *alpha_o, *eps_o, *margin_o, *budget_o, *band_o, *jmax_o,
        *spw_o, *nrad_o, *validate_o;
};

void run_field_build(const BuildArgs& a) {
    Resolver r = make_resolver(a.common, "field.build");
    fields::ReferenceParams rp;
    rp.alpha = r.num(a.alpha_o, a.alpha, "alpha");
    rp.epsilon = r.num(a.eps_o, a.epsilon, "epsilon");
    rp.margin = r.num(a.margin_o, a.margin, "margin");
    rp.C_budget = r.num(a.budget_o, a.budget, "budget");
    rp.band_fraction = r.num(a.band_o, a.band_fraction, "band_fraction");
    const long j_max = r.integer(a.jmax_o, a.j_max, "j_max");
    const bool validate = r.flag(a.validate_o, a.validate, "validate");
    fields::ValidateOptions vo;
    vo.samples_per_window = static_cast<int>(
        r.integer(a.spw_o, a.samples_per_window, "samples_per_window"));
    vo.n_radii = static_cast<int>(r.integer(a.nrad_o, a.n_radii, "n_radii"));
    io::CsvTable table;
    if (j_max == 0) {
        // An empty lattice is a legal request: emit the header only.
        table = io::annulus_table(
            fields::SwirlProfile::from_kernel(
                [](double, double) { return fields::OmegaLog{}; }, rp.alpha,
                rp.epsilon, 1.0, rp.C_budget),
            false);
        table.rows.clear();
    } else {
        rp.J_max = static_cast<int>(j_max);
        const fields::SwirlProfile prof = fields::build_reference_profile(rp);
        table = io::annulus_table(prof, validate, vo);
    }
    emit(a.common, r, "field build", std::move(table));
}

struct NormsArgs {
    CommonOpts common;
    std::string mode = "l2", flux;
    double alpha = 2.5;
    long j_max = 8, j = 0, m_max = 5, n_r = 256, n_theta = 8;
    bool strict = false;
    CLI::Option *mode_o, *flux_o, *alpha_o, *jmax_o, *j_o, *mmax_o, *nr_o,
        *nth_o, *strict_o;
};

void run_field_norms(const NormsArgs& a) {
    Resolver r = make_resolver(a.common, "field.norms");
    const std::string mode = r.str(a.mode_o, a.mode, "mode");
    if (mode != "l2" && mode != "alpha" && mode != "f6") {
        throw Error(ErrorCode::ConfigInvalid,
                    "mode must be l2, alpha, or f6, got " + mode);
    }
    // The truncated-energy dichotomy needs the sub-unit flux margin; the
    // divergent sums need the full budget.
    const std::string flux_default = mode == "l2" ? "rolloff" : "constant";
    const std::string flux =
        r.str(a.flux_o, a.flux.empty() ? flux_default : a.flux, "flux");
    fields::ReferenceParams rp;
    rp.alpha = r.num(a.alpha_o, a.alpha, "alpha");
    rp.J_max = static_cast<int>(r.integer(a.jmax_o, a.j_max, "j_max"));
    const fields::TubeField field =
        fields::make_tube_field(fields::build_reference_profile(rp),
                                parse_flux(flux));
    io::CsvTable table;
    if (mode == "l2") {
        const long m_max = r.integer(a.mmax_o, a.m_max, "m_max");
        const long n_r = r.integer(a.nr_o, a.n_r, "n_r");
        const long n_theta = r.integer(a.nth_o, a.n_theta, "n_theta");
        table = io::truncated_energy_table(field, static_cast<int>(m_max),
                                           static_cast<int>(n_r),
                                           static_cast<int>(n_theta));
    } else {
        const long j = r.integer(a.j_o, a.j == 0 ? rp.J_max : a.j, "j");
        const bool strict = r.flag(a.strict_o, a.strict, "strict");
        norms::PartialSumOptions opt;
        opt.skip_uncertified = !strict;
        table = io::partial_sum_table(
            field,
            mode == "alpha" ? norms::SumMode::speed_alpha
                            : norms::SumMode::direction_six,
            static_cast<int>(j), opt);
    }
    emit(a.common, r, "field norms", std::move(table));
}

struct GrowthArgs {
    CommonOpts common;
    double floor_L = 1.0, cap = 2.0, seed_r = 0.002, step = 1e-4,
           s_max = 2.0, z_stop = std::numeric_limits<double>::infinity();
    std::string flux = "rolloff";
    long j_max = 8;
    CLI::Option *l_o, *cap_o, *seed_o, *step_o, *smax_o, *zstop_o, *flux_o,
        *jmax_o;
};

void run_field_growth(const GrowthArgs& a) {
    Resolver r = make_resolver(a.common, "field.growth");
    const double L = r.num(a.l_o, a.floor_L, "floor");
    const double cap = r.num(a.cap_o, a.cap, "cap");
    fields::GrowthOptions opt;
    opt.starts = {{r.num(a.seed_o, a.seed_r, "seed_r"), 0.0, 0.0}};
    opt.step = r.num(a.step_o, a.step, "step");
    opt.s_max = r.num(a.smax_o, a.s_max, "s_max");
    opt.z_stop = r.num(a.zstop_o, a.z_stop, "z_stop");
    const std::string flux = r.str(a.flux_o, a.flux, "flux");
    fields::ReferenceParams rp;
    rp.J_max = static_cast<int>(r.integer(a.jmax_o, a.j_max, "j_max"));
    const fields::TubeField field = fields::make_tube_field(
        fields::build_reference_profile(rp), parse_flux(flux));
    emit(a.common, r, "field growth",
         io::growth_table(field, L, cap, opt));
}

struct EnergyArgs {
    CommonOpts common;
    double alpha = 2.5, gamma = 2.0, R = 10.0, beta = 1.1;
    long n_rho = 2048, k_max = 5;
    CLI::Option *alpha_o, *gamma_o, *nrho_o, *r_o, *beta_o, *kmax_o;
};

void run_degiorgi_energy(const EnergyArgs& a) {
    Resolver r = make_resolver(a.common, "degiorgi.energy");
    const double alpha = r.num(a.alpha_o, a.alpha, "alpha");
    const double gamma = r.num(a.gamma_o, a.gamma, "gamma");
    const long n_rho = r.integer(a.nrho_o, a.n_rho, "n_rho");
    const double R = r.num(a.r_o, a.R, "R");
    const double beta = r.num(a.beta_o, a.beta, "beta");
    const long k_max = r.integer(a.kmax_o, a.k_max, "k_max");
    const degiorgi::SpaceTimeField f = degiorgi::make_radial_snapshot_family(
        alpha, gamma, static_cast<int>(n_rho));
    const degiorgi::TruncationLedger led =
        degiorgi::degiorgi_driver(f, R, beta, static_cast<int>(k_max));
    emit(a.common, r, "degiorgi energy", io::ledger_table(led));
}

struct CheckArgs {
    CommonOpts common;
    io::CheckParams cp;
    long n_rho = 4096, k = 2;
    CLI::Option *which_o, *alpha_o, *gamma_o, *nrho_o, *r_o, *beta_o, *k_o,
        *delta_o, *q_o, *c0_o, *slack_o;
};

void run_degiorgi_check(CheckArgs& a) {
    Resolver r = make_resolver(a.common, "degiorgi.check");
    io::CheckParams cp = a.cp;
    cp.which = r.str(a.which_o, a.cp.which, "which");
    cp.alpha = r.num(a.alpha_o, a.cp.alpha, "alpha");
    cp.gamma = r.num(a.gamma_o, a.cp.gamma, "gamma");
    cp.n_rho = static_cast<int>(r.integer(a.nrho_o, a.n_rho, "n_rho"));
    cp.R = r.num(a.r_o, a.cp.R, "R");
    cp.beta = r.num(a.beta_o, a.cp.beta, "beta");
    cp.k = static_cast<int>(r.integer(a.k_o, a.k, "k"));
    cp.delta = r.num(a.delta_o, a.cp.delta, "delta");
    cp.q = r.num(a.q_o, a.cp.q, "q");
    cp.C0 = r.num(a.c0_o, a.cp.C0, "c0");
    cp.slack = r.num(a.slack_o, a.cp.slack, "slack");
    emit(a.common, r, "degiorgi check", io::check_table(cp));
}

struct FeasArgs {
    CommonOpts common;
    double alpha = 2.5;
    CLI::Option* alpha_o;
};

void run_analysis_feasibility(const FeasArgs& a) {
    Resolver r = make_resolver(a.common, "analysis.feasibility");
    const double alpha = r.num(a.alpha_o, a.alpha, "alpha");
    emit(a.common, r, "analysis feasibility", io::feasibility_table(alpha));
}

struct RecArgs {
    CommonOpts common;
    double B = 2.0, beta = 5.0 / 3.0, a1 = 0.5;
    long k_max = 200;
    CLI::Option *b_o, *beta_o, *a1_o, *kmax_o;
};

void run_analysis_recurrence(const RecArgs& a) {
    Resolver r = make_resolver(a.common, "analysis.recurrence");
    const double B = r.num(a.b_o, a.B, "B");
    const double beta = r.num(a.beta_o, a.beta, "beta");
    const double a1 = r.num(a.a1_o, a.a1, "a1");
    const long k_max = r.integer(a.kmax_o, a.k_max, "k_max");
    emit(a.common, r, "analysis recurrence",
         io::recurrence_table(B, beta, a1, static_cast<int>(k_max)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "swirllab: a desk-scale laboratory for a divergence-free swirl tube "
        "(norm dichotomies, streamline growth, truncation energies, "
        "exponent feasibility)"};
    app.require_subcommand(1);

    CLI::App* field = app.add_subcommand("field", "tube-field construction "
                                                  "and norm reports");
    field->require_subcommand(1);
    CLI::App* dg = app.add_subcommand("degiorgi", "truncation-energy "
                                                  "apparatus");
    dg->require_subcommand(1);
    CLI::App* an = app.add_subcommand("analysis", "exponent arithmetic and "
                                                  "recurrence traces");
    an->require_subcommand(1);

    BuildArgs build;
    {
        CLI::App* c = field->add_subcommand(
            "build", "construct the swirl profile and report its annuli");
        add_common(c, build.common);
        build.alpha_o = c->add_option("--alpha", build.alpha,
                                      "swirl decay exponent in (2, 3)");
        build.eps_o = c->add_option("--epsilon", build.epsilon,
                                    "guard-slope safety parameter");
        build.margin_o = c->add_option("--margin", build.margin,
                                       "multiplicative corridor margin");
        build.budget_o = c->add_option("--budget", build.budget,
                                       "per-annulus budget constant");
        build.band_o = c->add_option("--band-fraction", build.band_fraction,
                                     "radial blend-band width fraction");
        build.jmax_o = c->add_option("--j-max", build.j_max,
                                     "annulus count (0 = header-only table)");
        build.validate_o = c->add_flag("--validate", build.validate,
                                       "append corridor verdict columns");
        build.spw_o = c->add_option("--samples-per-window",
                                    build.samples_per_window,
                                    "validation lattice density");
        build.nrad_o = c->add_option("--n-radii", build.n_radii,
                                     "validation radii per annulus");
        c->callback([&build] { run_field_build(build); });
    }

    NormsArgs nrm;
    {
        CLI::App* c = field->add_subcommand(
            "norms", "truncated energies or per-annulus partial sums");
        add_common(c, nrm.common);
        nrm.mode_o = c->add_option("--mode", nrm.mode, "l2 | alpha | f6");
        nrm.flux_o = c->add_option("--flux", nrm.flux,
                                   "rolloff | constant (default depends on "
                                   "mode)");
        nrm.alpha_o = c->add_option("--alpha", nrm.alpha,
                                    "swirl decay exponent");
        nrm.jmax_o = c->add_option("--j-max", nrm.j_max, "annulus count");
        nrm.j_o = c->add_option("--j", nrm.j,
                                "partial-sum upper index (default j-max)");
        nrm.mmax_o = c->add_option("--m-max", nrm.m_max,
                                   "finest truncation decade (l2 mode)");
        nrm.nr_o = c->add_option("--n-r", nrm.n_r, "radial cells (l2 mode)");
        nrm.nth_o = c->add_option("--n-theta", nrm.n_theta,
                                  "angular cells (l2 mode)");
        nrm.strict_o = c->add_flag("--strict", nrm.strict,
                                   "fail on uncertified annuli instead of "
                                   "skipping them (f6 mode)");
        c->callback([&nrm] { run_field_norms(nrm); });
    }

    GrowthArgs gr;
    {
        CLI::App* c = field->add_subcommand(
            "growth", "streamline growth-rate report for the direction "
                      "divergence");
        add_common(c, gr.common);
        gr.l_o = c->add_option("--floor", gr.floor_L,
                               "qualifying divergence floor L");
        gr.cap_o = c->add_option("--cap", gr.cap, "growth-rate cap");
        gr.seed_o = c->add_option("--seed-r", gr.seed_r,
                                  "starting radius of the streamline");
        gr.step_o = c->add_option("--step", gr.step, "arc-length step");
        gr.smax_o = c->add_option("--s-max", gr.s_max, "arc-length horizon");
        gr.zstop_o = c->add_option("--z-stop", gr.z_stop,
                                   "stop once the axial coordinate passes "
                                   "this");
        gr.flux_o = c->add_option("--flux", gr.flux, "rolloff | constant");
        gr.jmax_o = c->add_option("--j-max", gr.j_max, "annulus count");
        c->callback([&gr] { run_field_growth(gr); });
    }

    EnergyArgs en;
    {
        CLI::App* c = dg->add_subcommand(
            "energy", "stage-by-stage truncation energies on both ladders");
        add_common(c, en.common);
        en.alpha_o = c->add_option("--alpha", en.alpha,
                                   "power-law family exponent");
        en.gamma_o = c->add_option("--gamma", en.gamma,
                                   "full-gradient to speed-gradient ratio");
        en.nrho_o = c->add_option("--n-rho", en.n_rho, "radial shells");
        en.r_o = c->add_option("--scale", en.R, "base threshold scale R");
        en.beta_o = c->add_option("--beta", en.beta,
                                  "second-ladder exponent");
        en.kmax_o = c->add_option("--k-max", en.k_max, "deepest stage");
        c->callback([&en] { run_degiorgi_energy(en); });
    }

    CheckArgs ck;
    {
        CLI::App* c = dg->add_subcommand(
            "check", "one closed-form bound check on the power-law family");
        add_common(c, ck.common);
        ck.which_o = c->add_option(
            "--which", ck.cp.which,
            "layercake | weaklp | cheb | domination");
        ck.alpha_o = c->add_option("--alpha", ck.cp.alpha,
                                   "power-law family exponent");
        ck.gamma_o = c->add_option("--gamma", ck.cp.gamma,
                                   "gradient ratio");
        ck.nrho_o = c->add_option("--n-rho", ck.n_rho, "radial shells");
        ck.r_o = c->add_option("--scale", ck.cp.R, "base threshold scale R");
        ck.beta_o = c->add_option("--beta", ck.cp.beta,
                                  "second-ladder exponent");
        ck.k_o = c->add_option("--k", ck.k, "stage index");
        ck.delta_o = c->add_option("--delta", ck.cp.delta,
                                   "interpolation tilt in (0, 4/3)");
        ck.q_o = c->add_option("--q", ck.cp.q,
                               "integrability exponent (cheb)");
        ck.c0_o = c->add_option("--c0", ck.cp.C0, "prefactor constant");
        ck.slack_o = c->add_option("--slack", ck.cp.slack,
                                   "quadrature slack (layercake)");
        c->callback([&ck] { run_degiorgi_check(ck); });
    }

    FeasArgs fe;
    {
        CLI::App* c = an->add_subcommand(
            "feasibility", "admissibility threshold, witness exponents, and "
                           "their limits");
        add_common(c, fe.common);
        fe.alpha_o = c->add_option("--alpha", fe.alpha,
                                   "swirl decay exponent");
        c->callback([&fe] { run_analysis_feasibility(fe); });
    }

    RecArgs rc;
    {
        CLI::App* c = an->add_subcommand(
            "recurrence", "doubly-exponential recurrence trace against the "
                          "seed threshold");
        add_common(c, rc.common);
        rc.b_o = c->add_option("--b", rc.B, "geometric constant B > 1");
        rc.beta_o = c->add_option("--beta", rc.beta,
                                  "super-linearity exponent > 1");
        rc.a1_o = c->add_option("--a1", rc.a1, "seed value");
        rc.kmax_o = c->add_option("--k-max", rc.k_max, "trace length");
        c->callback([&rc] { run_analysis_recurrence(rc); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the parse error
        return rc == 0 ? 0 : 64;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return io::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}
