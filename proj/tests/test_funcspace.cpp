#include <doctest.h>

#include "mintau/funcspace.hpp"
#include "mintau/rng.hpp"

using namespace mintau;

namespace {

HistoryPath random_path(Rng& rng, int dim, double delay, int segments, double amp) {
    std::vector<double> flat;
    for (int i = 0; i <= segments; ++i)
        for (int d = 0; d < dim; ++d) flat.push_back(rng.uniform(-amp, amp));
    return HistoryPath(dim, delay, std::move(flat));
}

}  // namespace

TEST_CASE("sup_norm on stored samples") {
    auto zero = HistoryPath::constant(2, 1.0, 4, {0.0, 0.0});
    CHECK(sup_norm(zero) == 0.0);

    HistoryPath x(1, 1.0, {-1.0, 0.5, 0.25});
    CHECK(sup_norm(x) == doctest::Approx(1.0).epsilon(1e-15));

    HistoryPath y(2, 0.5, {3.0, 4.0, 0.0, 0.0});
    CHECK(sup_norm(y) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("lip_constant from adjacent slopes") {
    auto c = HistoryPath::constant(1, 2.0, 8, {3.0});
    CHECK(lip_constant(c) == 0.0);

    HistoryPath x(1, 1.0, {0.0, 0.5, 1.5});
    CHECK(lip_constant(x) == doctest::Approx(2.0).epsilon(1e-15));

    HistoryPath y(1, 2.0, {0.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(lip_constant(y) == doctest::Approx(2.0).epsilon(1e-15));

    LipschitzClassTag tag{2.0};
    CHECK(tag.contains(y));
    CHECK_FALSE(LipschitzClassTag{1.9}.contains(y));
}

TEST_CASE("combine arithmetic and shape errors") {
    HistoryPath x(1, 1.0, {1.0, 2.0});
    HistoryPath h(1, 1.0, {0.1, -0.1});
    auto r = combine(x, h, 2.0);
    CHECK(r.sample(0)[0] == doctest::Approx(1.2));
    CHECK(r.sample(1)[0] == doctest::Approx(1.8));

    auto same = combine(x, h, 0.0);
    CHECK(same.sample(0)[0] == 1.0);
    CHECK(same.sample(1)[0] == 2.0);

    auto ones = HistoryPath::constant(1, 1.0, 1, {1.0});
    auto halves = HistoryPath::constant(1, 1.0, 1, {0.5});
    auto cancelled = combine(ones, halves, -2.0);
    CHECK(sup_norm(cancelled) == 0.0);

    HistoryPath other(1, 1.0, {0.0, 0.0, 0.0});  // different grid
    CHECK_THROWS_AS(combine(x, other, 1.0), ShapeError);
    HistoryPath wide(2, 1.0, {0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(combine(x, wide, 1.0), ShapeError);
}

TEST_CASE("evaluation reproduces samples and interpolates") {
    HistoryPath x(1, 1.0, {0.0, 0.5, 1.5});
    for (int i = 0; i <= x.segments(); ++i)
        CHECK(x.at(x.grid_time(i))[0] == x.sample(i)[0]);
    CHECK(x.at(-0.75)[0] == doctest::Approx(0.25));
    CHECK_THROWS_AS(x.at(-1.5), DomainError);
    CHECK_THROWS_AS(x.at(0.5), DomainError);
}

TEST_CASE("norm and lip inequalities on random paths") {
    Rng rng(42);
    for (int it = 0; it < 200; ++it) {
        int dim = 1 + rng.uniform_int(3);
        int segs = 1 + rng.uniform_int(16);
        double a = rng.uniform(-3.0, 3.0);
        auto x = random_path(rng, dim, 1.25, segs, 2.0);
        auto h = random_path(rng, dim, 1.25, segs, 2.0);
        auto xh = combine(x, h, a);
        CHECK(sup_norm(xh) <= sup_norm(x) + std::abs(a) * sup_norm(h) + 1e-12);
        CHECK(lip_constant(xh) <= lip_constant(x) + std::abs(a) * lip_constant(h) + 1e-9);

        auto zero = HistoryPath::constant(dim, 1.25, segs, Point(dim, 0.0));
        auto scaledh = combine(zero, h, a);
        CHECK(sup_norm(scaledh) == doctest::Approx(std::abs(a) * sup_norm(h)).epsilon(1e-12));
    }
}

TEST_CASE("invalid constructions are rejected") {
    CHECK_THROWS_AS(HistoryPath(1, 1.0, {0.0}), ShapeError);
    CHECK_THROWS_AS(HistoryPath(1, -1.0, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(HistoryPath(1, 1.0, {0.0, std::nan("")}), DomainError);
}
