// casmode command-line interface: mode spectra, dispersion curves, energy
// breakdowns, the plasmonic sign crossover, and asymptotic-constant fits,
// all emitted as CSV. Natural units c = hbar = 1 throughout; frequencies
// print in units of omega_p, separations in units of the plasma wavelength
// lambda_p = 2 pi c / omega_p, transverse wavevectors are given in units of
// omega_p / c.

#include "CLI11.hpp"
#include "casmode/casmode.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace casmode;

constexpr double alpha_reference = 1.193; // short-distance energy coefficient
constexpr double beta_reference = 74.58;  // large-distance sqrt coefficient

struct CommonOpts {
    double omega_p = 1.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& c)
{
    cmd->add_option("--omega-p", c.omega_p, "plasma frequency (overall scale)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", c.out, "write CSV to this file instead of stdout");
}

NumericsConfig make_numerics(const CommonOpts& c)
{
    NumericsConfig cfg;
    cfg.quad.rel_tol = c.rel_tol;
    cfg.quad.abs_tol = c.abs_tol;
    return cfg;
}

std::ostream& open_out(const std::string& path, std::ofstream& file)
{
    if (path.empty())
        return std::cout;
    file.open(path);
    if (!file)
        throw Error("cannot open output file: " + path);
    return file;
}

std::vector<double> linear_grid(double lo, double hi, int n)
{
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    return g;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g(n);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : std::exp(la + (lb - la) * i / (n - 1.0));
    return g;
}

const std::vector<std::string> mode_header = {
    "kL_over_pi", "pol", "branch", "m", "omega_over_omegap", "kz_over_kp", "sector"};

const std::vector<std::string> sweep_header = {
    "L_over_lambdap", "eta",    "eta_pl",    "eta_pl_plus",
    "eta_pl_minus",   "eta_ph", "err_total", "err_pl"};

void mode_row(std::ostream& os, const MirrorModel& model, double t, const ModePoint& p)
{
    const double wp = model.omega_p;
    std::string m = p.branch.kind == ModeBranch::Kind::Photonic
                        ? std::to_string(p.branch.m)
                        : std::string{};
    std::string kz = p.sector == FrequencySector::Propagating
                         ? csv_number(std::sqrt((p.omega - p.k) * (p.omega + p.k)) / wp)
                         : std::string{};
    csv_row(os, {csv_number(t), to_string(p.pol), to_string(p.branch), m,
                 csv_number(p.omega / wp), kz, to_string(p.sector)});
}

void breakdown_row(std::ostream& os, const EnergyBreakdown& b)
{
    csv_row(os, {csv_number(b.L_over_lambda_p), csv_number(b.eta_total),
                 csv_number(b.eta_pl), csv_number(b.eta_pl_plus),
                 csv_number(b.eta_pl_minus), csv_number(b.eta_ph),
                 csv_number(b.err_total), csv_number(b.err_pl)});
}

// --- modes ---------------------------------------------------------------

struct ModesOpts {
    CommonOpts common;
    double k = 0.5;
    double kl_pi_min = 0.05;
    double kl_pi_max = 3.0;
    int points = 40;
    int m_max = 8;
    std::string pol = "both";
    bool perfect = false;
};

int run_modes(const ModesOpts& o)
{
    const MirrorModel model{o.common.omega_p};
    const double k = o.k * model.omega_p;
    const RootConfig rcfg;

    std::ofstream file;
    std::ostream& os = open_out(o.common.out, file);
    csv_row(os, mode_header);

    std::vector<Polarization> pols;
    if (o.pol == "TE" || o.pol == "both")
        pols.push_back(Polarization::TE);
    if (o.pol == "TM" || o.pol == "both")
        pols.push_back(Polarization::TM);

    for (double t : linear_grid(o.kl_pi_min, o.kl_pi_max, o.points)) {
        const double L = t * pi / k;
        for (Polarization pol : pols) {
            if (o.perfect) {
                // reference rungs of an ideal cavity: k_z = m pi / L
                for (int m = 1; m <= o.m_max; ++m) {
                    const double kz = m * pi / L;
                    mode_row(os, model, t,
                             ModePoint{pol, ModeBranch::photonic(m), k, L,
                                       std::hypot(k, kz), FrequencySector::Propagating});
                }
                continue;
            }
            for (const ModePoint& p : solve_photonic(model, pol, k, L, o.m_max, rcfg))
                mode_row(os, model, t, p);
            if (pol == Polarization::TM) {
                const PlasmonPair pp = solve_plasmonic(model, k, L, rcfg);
                mode_row(os, model, t, pp.minus);
                mode_row(os, model, t, pp.plus);
            }
        }
    }
    return 0;
}

// --- dispersion ----------------------------------------------------------

struct DispersionOpts {
    CommonOpts common;
    double k = 0.5;
    double kl_pi_min = 0.05;
    double kl_pi_max = 3.0;
    int points = 60;
    int m = 1;
    std::string branch = "plus";
    std::string pol = "TM";
};

int run_dispersion(const DispersionOpts& o)
{
    const MirrorModel model{o.common.omega_p};
    const double k = o.k * model.omega_p;
    const Polarization pol = o.pol == "TE" ? Polarization::TE : Polarization::TM;
    ModeBranch branch = ModeBranch::photonic(o.m);
    if (o.branch == "plus")
        branch = ModeBranch::plus();
    else if (o.branch == "minus")
        branch = ModeBranch::minus();

    std::vector<double> schedule;
    for (double t : linear_grid(o.kl_pi_min, o.kl_pi_max, o.points))
        schedule.push_back(t * pi / k);

    const DispersionCurve curve = dispersion_sweep(model, branch, pol, k, schedule);

    std::ofstream file;
    std::ostream& os = open_out(o.common.out, file);
    csv_row(os, mode_header);
    for (const auto& [t, w] : curve.points)
        mode_row(os, model, t,
                 ModePoint{pol, branch, k, t * pi / k, w, classify_sector(w, k)});
    if (curve.termination == DispersionCurve::Termination::BranchLost)
        std::cerr << "note: branch left its domain inside the requested range; "
                     "curve truncated\n";
    return 0;
}

// --- eta / sweep ----------------------------------------------------------

struct EtaOpts {
    CommonOpts common;
    double L = 0.1;
    bool clip = false;
};

int run_eta(const EtaOpts& o)
{
    const MirrorModel model{o.common.omega_p};
    const EnergyBreakdown b =
        energy_breakdown(model, o.L * model.lambda_p(), make_numerics(o.common),
                         o.clip ? PlasmonSplit::ClipAtLightLine : PlasmonSplit::Full);
    std::ofstream file;
    std::ostream& os = open_out(o.common.out, file);
    csv_row(os, sweep_header);
    breakdown_row(os, b);
    return 0;
}

struct SweepOpts {
    CommonOpts common;
    double l_min = 1e-3;
    double l_max = 3e2;
    int points = 60;
    int threads = 0;
    bool clip = false;
};

int run_sweep(const SweepOpts& o)
{
    const MirrorModel model{o.common.omega_p};
    std::vector<double> Ls;
    for (double x : log_grid(o.l_min, o.l_max, o.points))
        Ls.push_back(x * model.lambda_p());
    const auto rows =
        sweep_breakdown(model, Ls, make_numerics(o.common),
                        o.clip ? PlasmonSplit::ClipAtLightLine : PlasmonSplit::Full,
                        o.threads);
    std::ofstream file;
    std::ostream& os = open_out(o.common.out, file);
    csv_row(os, sweep_header);
    for (const auto& b : rows)
        breakdown_row(os, b);
    return 0;
}

// --- crossover -------------------------------------------------------------

struct CrossoverOpts {
    CommonOpts common;
    bool clip = false;
};

int run_crossover(const CrossoverOpts& o)
{
    const MirrorModel model{o.common.omega_p};
    const CrossoverResult r =
        find_plasmonic_crossover(model, make_numerics(o.common),
                                 o.clip ? PlasmonSplit::ClipAtLightLine : PlasmonSplit::Full);
    std::ofstream file;
    std::ostream& os = open_out(o.common.out, file);
    csv_row(os, {"L_cross_over_lambdap", "uncertainty"});
    csv_row(os, {csv_number(r.L_over_lambda_p), csv_number(r.uncertainty)});
    return 0;
}

// --- fit -------------------------------------------------------------------

struct FitOpts {
    CommonOpts common;
    std::string which = "both";
    std::string window;
    int points = 8;
    bool strict = false;
};

int run_fit(const FitOpts& o)
{
    std::pair<double, double> alpha_window{1e-3, 1e-2};
    std::pair<double, double> beta_window{30.0, 300.0};
    if (!o.window.empty()) {
        if (o.which == "both") {
            std::cerr << "error: --window requires --which alpha or --which beta\n";
            return 1;
        }
        double lo = 0.0, hi = 0.0;
        if (std::sscanf(o.window.c_str(), "%lf,%lf", &lo, &hi) != 2 || !(lo < hi) ||
            lo <= 0.0) {
            std::cerr << "error: --window must be \"lo,hi\" with 0 < lo < hi\n";
            return 1;
        }
        (o.which == "alpha" ? alpha_window : beta_window) = {lo, hi};
    }
    if (o.points < 4) {
        std::cerr << "error: --points must be >= 4 for a fit\n";
        return 1;
    }

    const MirrorModel model{o.common.omega_p};
    const AsymptoticConstants c = fit_asymptotic_constants(
        model, make_numerics(o.common), alpha_window, beta_window, o.points);

    std::ofstream file;
    std::ostream& os = open_out(o.common.out, file);
    csv_row(os, {"name", "value", "exponent", "prefactor", "residual", "window_lo",
                 "window_hi"});
    auto fit_row = [&](const std::string& name, double value, const FitResult& f) {
        csv_row(os, {name, csv_number(value), csv_number(f.exponent),
                     csv_number(f.prefactor), csv_number(f.residual),
                     csv_number(f.window_lo), csv_number(f.window_hi)});
    };
    const bool want_alpha = o.which != "beta";
    const bool want_beta = o.which != "alpha";
    if (want_alpha)
        fit_row("alpha", c.alpha, c.alpha_fit);
    if (want_beta) {
        fit_row("beta", c.beta, c.beta_fit_photonic);
        fit_row("beta_plasmonic", c.beta_fit_plasmonic.prefactor, c.beta_fit_plasmonic);
    }

    if (o.strict) {
        bool ok = true;
        if (want_alpha && std::abs(c.alpha - alpha_reference) > 0.01 * alpha_reference)
            ok = false;
        if (want_beta && std::abs(c.beta - beta_reference) > 0.03 * beta_reference)
            ok = false;
        if (!ok) {
            std::cerr << "strict: fitted constants outside reference tolerance\n";
            return 3;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Casimir energy of plasma-model mirrors by mode decomposition"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from an INI-style file (key = value)");

    ModesOpts mo;
    CLI::App* modes = app.add_subcommand("modes", "cavity mode spectrum vs kL/pi at fixed k");
    add_common(modes, mo.common);
    modes->add_option("--k", mo.k, "transverse wavevector in units of omega_p/c")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    modes->add_option("--kl-pi-min", mo.kl_pi_min)->check(CLI::PositiveNumber)->capture_default_str();
    modes->add_option("--kl-pi-max", mo.kl_pi_max)->check(CLI::PositiveNumber)->capture_default_str();
    modes->add_option("--points", mo.points)->check(CLI::Range(1, 100000))->capture_default_str();
    modes->add_option("--m-max", mo.m_max)->check(CLI::Range(1, 10000))->capture_default_str();
    modes->add_option("--pol", mo.pol)->check(CLI::IsMember({"TE", "TM", "both"}))->capture_default_str();
    modes->add_flag("--perfect", mo.perfect, "ideal-mirror reference rungs k_z = m pi / L");

    DispersionOpts do_;
    CLI::App* disp = app.add_subcommand("dispersion", "follow one branch vs kL/pi by continuation");
    add_common(disp, do_.common);
    disp->add_option("--k", do_.k, "transverse wavevector in units of omega_p/c")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    disp->add_option("--kl-pi-min", do_.kl_pi_min)->check(CLI::PositiveNumber)->capture_default_str();
    disp->add_option("--kl-pi-max", do_.kl_pi_max)->check(CLI::PositiveNumber)->capture_default_str();
    disp->add_option("--points", do_.points)->check(CLI::Range(2, 100000))->capture_default_str();
    disp->add_option("--m", do_.m, "photonic mode order")->check(CLI::Range(1, 10000))->capture_default_str();
    disp->add_option("--branch", do_.branch)->check(CLI::IsMember({"photonic", "plus", "minus"}))->capture_default_str();
    disp->add_option("--pol", do_.pol)->check(CLI::IsMember({"TE", "TM"}))->capture_default_str();

    EtaOpts eo;
    CLI::App* eta = app.add_subcommand("eta", "energy breakdown at one separation");
    add_common(eta, eo.common);
    eta->add_option("--L", eo.L, "separation in units of lambda_p")
        ->required()
        ->check(CLI::PositiveNumber);
    eta->add_flag("--split-at-light-line", eo.clip,
                  "cap the upper plasmonic branch at omega = ck in the split");

    SweepOpts so;
    CLI::App* sweep = app.add_subcommand("sweep", "energy breakdown over a log grid of separations");
    add_common(sweep, so.common);
    sweep->add_option("--l-min", so.l_min, "smallest separation, units lambda_p")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--l-max", so.l_max, "largest separation, units lambda_p")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--points", so.points)->check(CLI::Range(1, 100000))->capture_default_str();
    sweep->add_option("--threads", so.threads, "worker threads (0 = hardware)")
        ->check(CLI::Range(0, 4096))
        ->capture_default_str();
    sweep->add_flag("--split-at-light-line", so.clip);

    CrossoverOpts co;
    CLI::App* cross = app.add_subcommand("crossover", "separation where the plasmonic energy changes sign");
    add_common(cross, co.common);
    cross->add_flag("--split-at-light-line", co.clip);

    FitOpts fo;
    CLI::App* fit = app.add_subcommand("fit", "asymptotic constants of the reduction factor");
    add_common(fit, fo.common);
    fit->add_option("--which", fo.which)->check(CLI::IsMember({"alpha", "beta", "both"}))->capture_default_str();
    fit->add_option("--window", fo.window, "fit window \"lo,hi\" in lambda_p units (with --which)");
    fit->add_option("--points", fo.points)->capture_default_str();
    fit->add_flag("--strict", fo.strict, "exit 3 if constants stray from their reference values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (modes->parsed())
            return run_modes(mo);
        if (disp->parsed())
            return run_dispersion(do_);
        if (eta->parsed())
            return run_eta(eo);
        if (sweep->parsed())
            return run_sweep(so);
        if (cross->parsed())
            return run_crossover(co);
        if (fit->parsed())
            return run_fit(fo);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
