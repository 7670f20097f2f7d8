#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "casmode/casmode.hpp"

using namespace casmode;

namespace {
const MirrorModel unit{};

// frozen cross-implementation references (independent integrator)
struct EtaRef { double x, eta; };
const EtaRef eta_refs[] = {
    {0.002, 0.0035753736174402254}, {0.005, 0.008900616956208815},
    {0.01, 0.017627037138846176},   {0.02, 0.03442379126198953},
    {0.04, 0.06542604474609662},    {0.05, 0.07977478676471111},
    {0.073, 0.11036992822681231},   {0.08, 0.11910497103930663},
    {0.1, 0.1428101946615183},      {0.16, 0.20519581339967238},
    {0.2, 0.24132018736258365},     {0.3, 0.318213253569306},
    {0.5, 0.4335190771942116},      {1.0, 0.6040795415892095},
    {30.0, 0.9791782025333468},     {50.0, 0.9874121126296764},
    {100.0, 0.9936701029347054},    {300.0, 0.9978819804164665},
};

const EtaRef eta_pl_refs[] = {
    {0.02, 0.031534185775107436},   {0.04, 0.04516909620590225},
    {0.05, 0.042398363296671196},   {0.073, 0.006971238535644293},
    {0.08, -0.012531014351039644},  {0.1, -0.09208268282204117},
    {0.16, -0.5483624385632885},    {0.2, -1.0267186978863063},
    {0.3, -2.7251356159871007},     {0.5, -7.461399537681625},
    {1.0, -21.43800046005801},      {30.0, -347.1906923229807},
    {100.0, -684.9160346222949},    {300.0, -1231.1954779892715},
};

const EtaRef eta_pl_clip_refs[] = {
    {0.04, 0.05872215563015709},    {0.08, 0.08311271473944008},
    {0.16, 0.04570410567408755},    {0.18, 0.022954425062999932},
    {0.2, -0.003837120322907942},   {0.22, -0.03414081438858803},
    {0.25, -0.08518114586135188},   {0.3, -0.18200879708652354},
    {1.0, -1.8681119420046195},
};
}

TEST_CASE("ideal mirror energy density", "[energy]")
{
    CHECK(ideal_casimir(1.0) == Catch::Approx(-pi * pi / 720.0).epsilon(1e-15));
    CHECK(ideal_casimir(2.0) == Catch::Approx(-pi * pi / 5760.0).epsilon(1e-15));
    CHECK_THROWS_AS(ideal_casimir(0.0), DomainError);
    CHECK_THROWS_AS(ideal_casimir(-1.0), DomainError);
}

TEST_CASE("total energy reproduces the frozen reduction-factor table", "[energy]")
{
    for (const EtaRef& r : eta_refs) {
        const double L = r.x * unit.lambda_p();
        const double eta = lifshitz_total(unit, L).value / ideal_casimir(L);
        CHECK(eta == Catch::Approx(r.eta).epsilon(1e-5));
    }
}

TEST_CASE("total energy error estimate is honest", "[energy]")
{
    for (double x : {0.01, 0.2, 5.0}) {
        const double L = x * unit.lambda_p();
        const IntegralResult r = lifshitz_total(unit, L);
        CHECK(r.error > 0.0);
        CHECK(r.error < 1e-6 * std::abs(r.value));
    }
    CHECK_THROWS_AS(lifshitz_total(unit, 0.0), DomainError);
}

TEST_CASE("plasmonic energy reproduces the frozen share table", "[energy]")
{
    for (const EtaRef& r : eta_pl_refs) {
        const double L = r.x * unit.lambda_p();
        const double eta_pl = plasmonic_energy(unit, L).value / ideal_casimir(L);
        CHECK(eta_pl == Catch::Approx(r.eta).epsilon(1e-5));
    }
    CHECK_THROWS_AS(plasmonic_energy(unit, -1.0), DomainError);
}

TEST_CASE("plasmonic branch shares at L = lambda_p", "[energy]")
{
    const double L = unit.lambda_p();
    const PlasmonicEnergy p = plasmonic_energy(unit, L);
    const double ec = ideal_casimir(L);
    CHECK(p.plus_part / ec == Catch::Approx(-33.2971413341807).epsilon(1e-5));
    CHECK(p.minus_part / ec == Catch::Approx(11.859140874116141).epsilon(1e-5));
    CHECK(p.value == Catch::Approx(p.plus_part + p.minus_part).margin(1e-15 * std::abs(p.value)));
    // the upper branch pushes outward, the lower binds, at every separation
    for (double x : {0.001, 0.05, 0.5, 20.0}) {
        const PlasmonicEnergy q = plasmonic_energy(unit, x * unit.lambda_p());
        CHECK(q.plus_part > 0.0);
        CHECK(q.minus_part < 0.0);
    }
}

TEST_CASE("light-line clipping reproduces its frozen table", "[energy]")
{
    for (const EtaRef& r : eta_pl_clip_refs) {
        const double L = r.x * unit.lambda_p();
        const double eta_pl =
            plasmonic_energy(unit, L, {}, PlasmonSplit::ClipAtLightLine).value / ideal_casimir(L);
        CHECK(eta_pl == Catch::Approx(r.eta).epsilon(1e-5));
    }
}

TEST_CASE("clipping only ever trims the upper branch", "[energy]")
{
    // the upper branch always starts propagating at small k, so the clip
    // bites at every separation; the lower branch must be untouched
    for (double x : {0.05, 0.1, 0.3, 1.0, 30.0}) {
        const double L = x * unit.lambda_p();
        const PlasmonicEnergy full = plasmonic_energy(unit, L);
        const PlasmonicEnergy clip = plasmonic_energy(unit, L, {}, PlasmonSplit::ClipAtLightLine);
        CHECK(clip.minus_part == Catch::Approx(full.minus_part).epsilon(1e-12));
        // clipping caps w+ at ck, so the (positive) upper-branch share shrinks
        CHECK(clip.plus_part < full.plus_part);
        CHECK(clip.plus_part > 0.0);
    }
}

TEST_CASE("mode decomposition closes: total = plasmonic + photonic", "[energy]")
{
    for (double x : {0.05, 0.3, 2.0}) {
        const double L = x * unit.lambda_p();
        const EnergyBreakdown b = energy_breakdown(unit, L);
        CHECK(b.eta_total == Catch::Approx(b.eta_pl + b.eta_ph).margin(1e-12));
        CHECK(b.eta_pl == Catch::Approx(b.eta_pl_plus + b.eta_pl_minus).margin(1e-12));
        CHECK(b.L_over_lambda_p == Catch::Approx(x).epsilon(1e-14));
        CHECK(b.err_total > 0.0);
        CHECK(b.err_pl > 0.0);
    }
}

TEST_CASE("direct photonic mode sum agrees with the subtraction route", "[energy]")
{
    for (double x : {0.3, 0.5, 1.0}) {
        const double L = x * unit.lambda_p();
        const IntegralResult direct = photonic_energy_direct(unit, L);
        const IntegralResult diff = photonic_energy(unit, L);
        CHECK(direct.value == Catch::Approx(diff.value).epsilon(1e-3));
        CHECK(direct.error < 1e-5 * std::abs(direct.value));
    }
}

TEST_CASE("sweep is ordered, complete, and thread-count independent", "[energy]")
{
    std::vector<double> Ls;
    for (double x : {0.001, 0.02, 0.08, 0.4, 3.0, 40.0, 300.0})
        Ls.push_back(x * unit.lambda_p());

    const auto serial = sweep_breakdown(unit, Ls, {}, PlasmonSplit::Full, 1);
    const auto threaded = sweep_breakdown(unit, Ls, {}, PlasmonSplit::Full, 4);
    REQUIRE(serial.size() == Ls.size());
    REQUIRE(threaded.size() == Ls.size());
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        CHECK(std::isfinite(serial[i].eta_total));
        CHECK(serial[i].L_over_lambda_p == Catch::Approx(Ls[i] / unit.lambda_p()).epsilon(1e-14));
        // identical arithmetic per point regardless of the thread count
        CHECK(serial[i].eta_total == threaded[i].eta_total);
        CHECK(serial[i].eta_pl == threaded[i].eta_pl);
    }
    // monotone reduction factor along the sweep
    for (std::size_t i = 1; i < Ls.size(); ++i)
        CHECK(serial[i].eta_total > serial[i - 1].eta_total);
}

TEST_CASE("plasmonic crossover distance", "[energy]")
{
    const CrossoverResult full = find_plasmonic_crossover(unit);
    CHECK(full.L_over_lambda_p == Catch::Approx(0.07568148960648081).margin(2e-6));
    CHECK(full.uncertainty > 0.0);
    CHECK(full.uncertainty < 1e-4);

    const CrossoverResult clip =
        find_plasmonic_crossover(unit, {}, PlasmonSplit::ClipAtLightLine);
    CHECK(clip.L_over_lambda_p == Catch::Approx(0.19729702041356945).margin(2e-6));

    // pure-number result: invariant under rescaling the plasma frequency
    MirrorModel doubled{2.0};
    const CrossoverResult scaled = find_plasmonic_crossover(doubled);
    CHECK(scaled.L_over_lambda_p == Catch::Approx(full.L_over_lambda_p).margin(1e-6));
}

TEST_CASE("asymptotic constants from the default windows", "[energy]")
{
    const AsymptoticConstants c = fit_asymptotic_constants(unit);
    CHECK(c.alpha == Catch::Approx(1.187576846934655).epsilon(1e-5));
    CHECK(c.beta == Catch::Approx(74.64224308974968).epsilon(1e-5));
    CHECK(c.beta_fit_plasmonic.prefactor == Catch::Approx(74.64086418684968).epsilon(1e-5));
    // the two beta estimates are independent routes to the same constant
    CHECK(c.beta_fit_photonic.prefactor ==
          Catch::Approx(c.beta_fit_plasmonic.prefactor).epsilon(1e-3));
    CHECK(c.alpha_fit.exponent == 1.0);
    CHECK(c.beta_fit_photonic.exponent == 0.5);
    CHECK(c.alpha_fit.residual < 0.02);
    CHECK(c.beta_fit_photonic.residual < 1e-3);

    CHECK_THROWS_AS(fit_asymptotic_constants(unit, {}, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(fit_asymptotic_constants(unit, {}, {1e-3, 1e-2}, {30.0, 300.0}, 3),
                    DomainError);
}

TEST_CASE("heavy mirrors recover the ideal energy", "[energy]")
{
    MirrorModel heavy{1e3};
    const double eta = lifshitz_total(heavy, 1.0).value / ideal_casimir(1.0);
    CHECK(eta == Catch::Approx(1.0).epsilon(5e-3));
    CHECK(eta < 1.0);
}

TEST_CASE("asymptotic laws of the reduction factor", "[energy]")
{
    // short distance: eta ~ (3 alpha / 2)(L / lambda_p)
    for (double x : {0.002, 0.005}) {
        const double L = x * unit.lambda_p();
        const double eta = lifshitz_total(unit, L).value / ideal_casimir(L);
        CHECK(eta == Catch::Approx(1.5 * 1.193 * x).epsilon(0.05));
    }
    // large distance: eta ~ 1 - 2 lambda_p / (pi L)
    for (double x : {50.0, 300.0}) {
        const double L = x * unit.lambda_p();
        const double eta = lifshitz_total(unit, L).value / ideal_casimir(L);
        CHECK(eta == Catch::Approx(1.0 - 2.0 / (pi * x)).epsilon(0.01));
    }
}
