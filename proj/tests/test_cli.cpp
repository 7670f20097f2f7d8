#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "casmode/casmode.hpp"

using namespace casmode;

namespace {

struct CliRun {
    std::string out;
    int code = -1;
};

CliRun run_cli(const std::string& args)
{
    const std::string cmd = std::string{"\""} + CASMODE_CLI_PATH + "\" " + args +
                            " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliRun r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        out.push_back(line);
    return out;
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

const std::string breakdown_header =
    "L_over_lambdap,eta,eta_pl,eta_pl_plus,eta_pl_minus,eta_ph,err_total,err_pl";
const std::string mode_header =
    "kL_over_pi,pol,branch,m,omega_over_omegap,kz_over_kp,sector";

} // namespace

TEST_CASE("eta subcommand emits one breakdown row", "[cli]")
{
    const CliRun r = run_cli("eta --L 50");
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == breakdown_header);

    const auto f = split_fields(lines[1]);
    REQUIRE(f.size() == 8);
    CHECK(std::stod(f[0]) == Catch::Approx(50.0).epsilon(1e-12));
    CHECK(std::stod(f[1]) == Catch::Approx(0.9874121126296764).epsilon(1e-6));
    // printed columns satisfy the decomposition identities
    CHECK(std::stod(f[1]) ==
          Catch::Approx(std::stod(f[2]) + std::stod(f[5])).margin(1e-7));
    CHECK(std::stod(f[2]) ==
          Catch::Approx(std::stod(f[3]) + std::stod(f[4])).margin(1e-7));
    CHECK(std::stod(f[6]) > 0.0);
    CHECK(std::stod(f[7]) > 0.0);
}

TEST_CASE("eta honours --out", "[cli]")
{
    const std::string path = "/tmp/casmode_test_eta.csv";
    std::remove(path.c_str());
    const CliRun direct = run_cli("eta --L 1");
    const CliRun filed = run_cli("eta --L 1 --out " + path);
    REQUIRE(direct.code == 0);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());

    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == direct.out);
    std::remove(path.c_str());

    const auto f = split_fields(split_lines(direct.out).at(1));
    CHECK(std::stod(f[1]) == Catch::Approx(0.6040795415892095).epsilon(1e-6));
}

TEST_CASE("sweep is reproducible and thread-count independent", "[cli]")
{
    const std::string args = "sweep --l-min 0.1 --l-max 10 --points 5";
    const CliRun a = run_cli(args);
    const CliRun b = run_cli(args);
    const CliRun c = run_cli(args + " --threads 4");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    const auto lines = split_lines(a.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == breakdown_header);
    CHECK(std::stod(split_fields(lines[1])[0]) == Catch::Approx(0.1).epsilon(1e-12));
    CHECK(std::stod(split_fields(lines[5])[0]) == Catch::Approx(10.0).epsilon(1e-12));
    double prev = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double eta = std::stod(split_fields(lines[i])[1]);
        CHECK(eta > prev);
        prev = eta;
    }
}

TEST_CASE("modes table matches the library spectrum", "[cli]")
{
    const CliRun r =
        run_cli("modes --k 1.0 --kl-pi-min 2.3 --kl-pi-max 2.3 --points 1 --m-max 4");
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == mode_header);

    const MirrorModel model{};
    const double k = 1.0;
    const double L = 2.3 * pi / k;

    std::vector<double> te, tm;
    double w_plus = 0.0, w_minus = 0.0;
    int n_plus = 0, n_minus = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_fields(lines[i]);
        REQUIRE(f.size() == 7);
        CHECK(std::stod(f[0]) == Catch::Approx(2.3).epsilon(1e-12));
        const double w = std::stod(f[4]);
        if (f[2] == "photonic") {
            (f[1] == "TE" ? te : tm).push_back(w);
            CHECK(f[6] == "propagating");
            // listed k_z column closes the dispersion relation w^2 = k^2 + kz^2
            CHECK(std::stod(f[5]) ==
                  Catch::Approx(std::sqrt(w * w - k * k)).epsilon(1e-9));
        } else if (f[2] == "plus") {
            ++n_plus;
            w_plus = w;
            CHECK(f[6] == "evanescent");
            CHECK(f[5].empty());
        } else {
            REQUIRE(f[2] == "minus");
            ++n_minus;
            w_minus = w;
            CHECK(f[6] == "evanescent");
        }
    }
    CHECK(n_plus == 1);
    CHECK(n_minus == 1);

    const PlasmonPair pp = solve_plasmonic(model, k, L);
    CHECK(w_plus == Catch::Approx(pp.plus.omega).epsilon(1e-9));
    CHECK(w_minus == Catch::Approx(pp.minus.omega).epsilon(1e-9));

    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        const auto lib = solve_photonic(model, pol, k, L, 4);
        const auto& got = pol == Polarization::TE ? te : tm;
        REQUIRE(got.size() == lib.size());
        for (std::size_t i = 0; i < lib.size(); ++i)
            CHECK(got[i] == Catch::Approx(lib[i].omega).epsilon(1e-9));
    }
}

TEST_CASE("perfect-mirror reference rungs", "[cli]")
{
    const CliRun r = run_cli("modes --k 0.5 --kl-pi-min 1.0 --kl-pi-max 1.0 "
                             "--points 1 --m-max 3 --pol TE --perfect");
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 4);
    for (int m = 1; m <= 3; ++m) {
        const auto f = split_fields(lines[static_cast<std::size_t>(m)]);
        CHECK(f[1] == "TE");
        CHECK(f[2] == "photonic");
        CHECK(f[3] == std::to_string(m));
        // L = pi / k, so the ideal rung sits at kz = m k
        CHECK(std::stod(f[4]) ==
              Catch::Approx(std::hypot(0.5, 0.5 * m)).epsilon(1e-10));
        CHECK(std::stod(f[5]) == Catch::Approx(0.5 * m).epsilon(1e-9));
    }
}

TEST_CASE("dispersion follows the lower plasmon branch to saturation", "[cli]")
{
    const CliRun r = run_cli("dispersion --branch minus --k 1.0 "
                             "--kl-pi-min 0.5 --kl-pi-max 6.0 --points 12");
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 13);
    CHECK(lines[0] == mode_header);

    const MirrorModel model{};
    const double ws = omega_sp(model, 1.0);
    double prev = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_fields(lines[i]);
        CHECK(f[2] == "minus");
        const double w = std::stod(f[4]);
        CHECK(w > prev);
        CHECK(w < ws);
        prev = w;
    }
    CHECK(prev == Catch::Approx(ws).margin(1e-5));
}

TEST_CASE("crossover subcommand and light-line variant", "[cli]")
{
    const CliRun full = run_cli("crossover");
    REQUIRE(full.code == 0);
    const auto lines = split_lines(full.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "L_cross_over_lambdap,uncertainty");
    const auto f = split_fields(lines[1]);
    CHECK(std::stod(f[0]) == Catch::Approx(0.07568148960648081).margin(2e-6));
    CHECK(std::stod(f[1]) > 0.0);

    const CliRun clip = run_cli("crossover --split-at-light-line");
    REQUIRE(clip.code == 0);
    const double xc = std::stod(split_fields(split_lines(clip.out).at(1))[0]);
    CHECK(xc == Catch::Approx(0.19729702041356945).margin(2e-6));

    // dimensionless observable: invariant under rescaling the plasma frequency
    const CliRun scaled = run_cli("crossover --omega-p 2.0");
    REQUIRE(scaled.code == 0);
    const double xs = std::stod(split_fields(split_lines(scaled.out).at(1))[0]);
    CHECK(xs == Catch::Approx(std::stod(f[0])).margin(1e-6));
}

TEST_CASE("fit subcommand reports the asymptotic constants", "[cli]")
{
    const CliRun r = run_cli("fit");
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "name,value,exponent,prefactor,residual,window_lo,window_hi");

    const auto alpha = split_fields(lines[1]);
    CHECK(alpha[0] == "alpha");
    CHECK(std::stod(alpha[1]) == Catch::Approx(1.187576846934655).epsilon(1e-4));
    CHECK(std::stod(alpha[2]) == 1.0);
    CHECK(std::stod(alpha[5]) == Catch::Approx(1e-3).epsilon(1e-9));
    CHECK(std::stod(alpha[6]) == Catch::Approx(1e-2).epsilon(1e-9));

    const auto beta = split_fields(lines[2]);
    CHECK(beta[0] == "beta");
    CHECK(std::stod(beta[1]) == Catch::Approx(74.64224308974968).epsilon(1e-4));
    CHECK(std::stod(beta[2]) == 0.5);
    CHECK(std::stod(beta[5]) == Catch::Approx(30.0).epsilon(1e-9));
    CHECK(std::stod(beta[6]) == Catch::Approx(300.0).epsilon(1e-9));

    const auto bpl = split_fields(lines[3]);
    CHECK(bpl[0] == "beta_plasmonic");
    CHECK(std::stod(bpl[1]) == Catch::Approx(74.64086418684968).epsilon(1e-4));

    // the defaults land inside the strict reference tolerances
    CHECK(run_cli("fit --strict").code == 0);
}

TEST_CASE("strict fit flags an out-of-window estimate", "[cli]")
{
    // the short-distance law does not hold at L ~ lambda_p / 3, so a fit
    // there must trip the strict gate
    const CliRun r = run_cli("fit --strict --which alpha --window 0.2,0.5 --points 4");
    CHECK(r.code == 3);
    CHECK(split_lines(r.out).size() == 2); // header + alpha row still printed
}

TEST_CASE("usage errors exit with code 1", "[cli]")
{
    CHECK(run_cli("eta").code == 1);                              // missing --L
    CHECK(run_cli("eta --L -1").code == 1);                       // domain check
    CHECK(run_cli("eta --L 1 --bogus").code == 1);                // unknown flag
    CHECK(run_cli("fit --window 1,2").code == 1);                 // needs --which
    CHECK(run_cli("fit --which alpha --window 2,1").code == 1);   // inverted
    CHECK(run_cli("fit --points 3").code == 1);                   // too few points
    CHECK(run_cli("").code == 1);                                 // no subcommand
}

TEST_CASE("numerical failures exit with code 2", "[cli]")
{
    // the coupled-plasmon branches only exist for TM polarisation
    const CliRun r = run_cli("dispersion --branch plus --pol TE --k 0.5");
    CHECK(r.code == 2);
    CHECK(r.out.empty());
}

TEST_CASE("config file supplies option defaults", "[cli]")
{
    const std::string path = "/tmp/casmode_test_config.ini";
    {
        std::ofstream cfg(path);
        cfg << "[eta]\nL = 50\n";
    }
    const CliRun direct = run_cli("eta --L 50");
    // --config belongs to the top-level app, ahead of the subcommand
    const CliRun viaConfig = run_cli("--config " + path + " eta");
    REQUIRE(viaConfig.code == 0);
    CHECK(viaConfig.out == direct.out);
    std::remove(path.c_str());
}
