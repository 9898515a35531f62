#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "edgelab/errors.hpp"
#include "edgelab/lattice.hpp"

using namespace edgelab;

namespace {
const double s3 = std::sqrt(3.0);

bool contains(const std::array<SiteIndex, 3>& nb, const SiteIndex& s) {
    return std::find(nb.begin(), nb.end(), s) != nb.end();
}
}

TEST_CASE("site positions") {
    Eigen::Vector2d p = site_position(SiteIndex(1, {0, 0}));
    CHECK(p.x() == doctest::Approx(-s3 / 6).epsilon(1e-15));
    CHECK(p.y() == doctest::Approx(1.0 / 6).epsilon(1e-15));
    p = site_position(SiteIndex(6, {0, 0}));
    CHECK(p.x() == doctest::Approx(s3 / 6).epsilon(1e-15));
    CHECK(p.y() == doctest::Approx(-1.0 / 6).epsilon(1e-15));
    p = site_position(SiteIndex(3, {1, 0}));
    CHECK(p.x() == doctest::Approx(s3 / 6 + s3 / 2).epsilon(1e-15));
    CHECK(p.y() == doctest::Approx(1.0 / 6 - 0.5).epsilon(1e-15));
    for (int j = 1; j <= 3; ++j) CHECK((site_offset(j) + site_offset(7 - j)).norm() < 1e-15);
}

TEST_CASE("site index range") {
    CHECK_THROWS_AS(SiteIndex(0, {0, 0}), ConfigError);
    CHECK_THROWS_AS(SiteIndex(7, {0, 0}), ConfigError);
}

TEST_CASE("neighbor rows") {
    const Cell l{4, -2};
    auto nb = neighbors(SiteIndex(1, l));
    CHECK(nb[0] == SiteIndex(4, l));
    CHECK(nb[1] == SiteIndex(5, l));
    CHECK(nb[2] == SiteIndex(6, l - Cell{1, 0}));
    nb = neighbors(SiteIndex(4, l));
    CHECK(nb[0] == SiteIndex(1, l));
    CHECK(nb[1] == SiteIndex(2, l));
    CHECK(nb[2] == SiteIndex(3, l - Cell{0, 1}));
    nb = neighbors(SiteIndex(6, {2, 3}));
    CHECK(nb[0] == SiteIndex(1, {3, 3}));
    CHECK(nb[1] == SiteIndex(2, {2, 3}));
    CHECK(nb[2] == SiteIndex(3, {2, 3}));
}

TEST_CASE("intracell and intercell split") {
    const Cell l{-1, 5};
    auto sp = classify_neighbors(SiteIndex(2, l));
    CHECK(sp.intracell[0] == SiteIndex(4, l));
    CHECK(sp.intracell[1] == SiteIndex(6, l));
    CHECK(sp.intercell[0] == SiteIndex(5, l + Cell{1, -1}));
    sp = classify_neighbors(SiteIndex(5, {0, 0}));
    CHECK(sp.intercell[0] == SiteIndex(2, {-1, 1}));
    for (int j = 1; j <= 6; ++j) {
        const SiteIndex s(j, l);
        sp = classify_neighbors(s);
        CHECK(sp.intracell[0].cell == l);
        CHECK(sp.intracell[1].cell == l);
        CHECK(!(sp.intercell[0].cell == l));
        const auto nb = neighbors(s);
        CHECK(contains(nb, sp.intracell[0]));
        CHECK(contains(nb, sp.intracell[1]));
        CHECK(contains(nb, sp.intercell[0]));
    }
}

TEST_CASE("mutuality, bipartiteness and bond length on a patch") {
    double len = -1;
    for (int p = -5; p < 5; ++p)
        for (int q = -5; q < 5; ++q)
            for (int j = 1; j <= 6; ++j) {
                const SiteIndex s(j, {p, q});
                for (const SiteIndex& t : neighbors(s)) {
                    CHECK(contains(neighbors(t), s));
                    CHECK((s.j <= 3) != (t.j <= 3));
                    const double d = (site_position(s) - site_position(t)).norm();
                    if (len < 0) len = d;
                    CHECK(std::abs(d - len) < 1e-14);
                }
            }
    CHECK(len == doctest::Approx((site_offset(1) - site_offset(4)).norm()));
    CHECK(len == doctest::Approx(1.0 / 3));
}

TEST_CASE("interface frames") {
    auto f = interface_frame(InterfaceKind::TypeI);
    CHECK(f.along == Cell{1, -1});
    CHECK(f.across == Cell{0, 1});
    f = interface_frame(InterfaceKind::TypeII);
    CHECK(f.along == Cell{1, 1});
    CHECK(f.across == Cell{0, 1});
    for (auto kind : {InterfaceKind::TypeI, InterfaceKind::TypeII}) {
        std::set<std::pair<int, int>> seen;
        for (int m = -6; m <= 6; ++m)
            for (int n = -6; n <= 6; ++n) {
                const Cell c = frame_to_cell(kind, m, n);
                CHECK(seen.insert({c.p, c.q}).second);
                CHECK(cell_to_frame(kind, c) == std::make_pair(m, n));
            }
        for (int p = -6; p <= 6; ++p)
            for (int q = -6; q <= 6; ++q) {
                const auto [m, n] = cell_to_frame(kind, {p, q});
                CHECK(frame_to_cell(kind, m, n) == Cell{p, q});
            }
    }
}

TEST_CASE("material sign") {
    CHECK(material_sign(InterfaceKind::TypeI, 5, 0) == 1);
    CHECK(material_sign(InterfaceKind::TypeII, 0, -1) == -1);
    CHECK(material_sign(InterfaceKind::TypeI, -3, 7) == 1);
}

TEST_CASE("sixty degree rotation is a lattice symmetry") {
    const double th = M_PI / 3;
    for (int p = -3; p <= 3; ++p)
        for (int q = -3; q <= 3; ++q) {
            const Eigen::Vector2d x = cell_position({p, q});
            const Eigen::Vector2d y = cell_position(rotate60({p, q}, 1));
            CHECK(std::abs(y.x() - (std::cos(th) * x.x() - std::sin(th) * x.y())) < 1e-13);
            CHECK(std::abs(y.y() - (std::sin(th) * x.x() + std::cos(th) * x.y())) < 1e-13);
            CHECK(rotate60({p, q}, 6) == Cell{p, q});
            CHECK(rotate60(rotate60({p, q}, 1), -1) == Cell{p, q});
        }
}

TEST_CASE("kind names") {
    CHECK(parse_kind(kind_name(InterfaceKind::TypeI)) == InterfaceKind::TypeI);
    CHECK(parse_kind(kind_name(InterfaceKind::TypeII)) == InterfaceKind::TypeII);
    CHECK_THROWS_AS(parse_kind("III"), ConfigError);
}
