#include <filesystem>
#include <functional>
#include <gtest/gtest.h>

#include "nnls/config.hpp"
#include "nnls/errors.hpp"
#include "nnls/io.hpp"

using namespace nnls;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::NumericalFailure;
}

}  // namespace

TEST(Config, GridAndList)
{
    const auto g = parse_grid("-1:1:5").values();
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.front(), -1.0);
    EXPECT_DOUBLE_EQ(g[2], 0.0);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    EXPECT_EQ(parse_list("10, 20,40"), (std::vector<double>{10.0, 20.0, 40.0}));
    EXPECT_EQ(kind_of([] { parse_grid("1:2"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { parse_list("1,x"); }), ErrorKind::Config);
}

TEST(Config, ParsesKeysAndComments)
{
    const auto cfg = parse_config(
        "# benchmark\n"
        "A = 1.5\n"
        "R = 3   # trailing comment\n"
        "\n"
        "sim.dx = 0.025\n"
        "sim.snapshot_times = 5,10\n"
        "zero_box.im_max = 2\n"
        "phase.rel_tol = 1e-9\n"
        "t_list = 1,2\n"
        "out = results\n");
    EXPECT_DOUBLE_EQ(cfg.bg.A, 1.5);
    EXPECT_DOUBLE_EQ(cfg.bg.R, 3.0);
    EXPECT_DOUBLE_EQ(cfg.sim.dx, 0.025);
    EXPECT_EQ(cfg.sim.snapshot_times, (std::vector<double>{5.0, 10.0}));
    EXPECT_DOUBLE_EQ(cfg.zero_box.im_max, 2.0);
    EXPECT_DOUBLE_EQ(cfg.phase.rel_tol, 1e-9);
    EXPECT_EQ(cfg.t_list, (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(cfg.out, "results");
    EXPECT_TRUE(cfg.pure_step());
}

TEST(Config, RejectsUnknownAndMalformed)
{
    EXPECT_EQ(kind_of([] { parse_config("bogus = 1\n"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { parse_config("A 1\n"); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { parse_config("A = one\n"); }), ErrorKind::Config);
}

TEST(Config, DefaultsRoundTrip)
{
    const auto cfg = parse_config(default_config_text());
    const ExperimentConfig ref;
    EXPECT_EQ(cfg.bg.A, ref.bg.A);
    EXPECT_EQ(cfg.bg.R, ref.bg.R);
    EXPECT_EQ(cfg.sim.L, ref.sim.L);
    EXPECT_EQ(cfg.sim.sponge_width, ref.sim.sponge_width);
    EXPECT_EQ(cfg.xi_grid.n, ref.xi_grid.n);
    EXPECT_EQ(cfg.t_list, ref.t_list);
}

TEST(Io, NumberFormatRoundTrips)
{
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0})
        EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Io, SnapshotRoundTrip)
{
    FieldSnapshot s;
    s.t = 2.5;
    s.L = 1.0;
    s.dx = 0.5;
    s.q = {cplx(1, 2), cplx(-0.25, 0), cplx(0, 1e-17), cplx(3, -3), cplx(0.1, 0.2)};
    const auto r = parse_snapshot_csv(snapshot_csv(s));
    EXPECT_EQ(r.t, s.t);
    EXPECT_EQ(r.L, s.L);
    EXPECT_EQ(r.dx, s.dx);
    EXPECT_EQ(r.q, s.q);
}

TEST(Io, ZerosJsonRoundTrip)
{
    ZeroSet z{{cplx(-0.1, 0.2), cplx(-0.4, 0.01)}, {cplx(1, -1), cplx(0.5, 0.25)}};
    OmegaSet om{{0.3}};
    AssumptionReport rep;
    ZeroSet z2;
    OmegaSet om2;
    parse_zeros_json(zeros_json(z, om, rep), z2, om2);
    EXPECT_EQ(z2.p, z.p);
    EXPECT_EQ(z2.eta, z.eta);
    EXPECT_EQ(om2.omegas, om.omegas);
}

TEST(Io, ProfileCsv)
{
    const auto dir = std::filesystem::temp_directory_path() / "nnls_test_profile";
    const auto path = dir / "p.csv";
    CsvTable t({"x", "re", "im"});
    for (int i = 0; i <= 40; ++i) {
        const double x = -4.0 + 0.2 * i;
        t.row().add(x).add(cplx(x > 2.0 ? 1.0 : 0.0, 0.0));
    }
    write_text(path, t.str());
    const auto p = read_profile_csv(path, {1.0, 2.0});
    EXPECT_DOUBLE_EQ(p.x_min(), -4.0);
    EXPECT_NEAR(p.dx(), 0.2, 1e-12);
    EXPECT_EQ(p.samples().size(), 41u);
    std::filesystem::remove_all(dir);
}
