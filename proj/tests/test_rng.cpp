#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hestonmc/rng.hpp"

using namespace hestonmc;

TEST_CASE("philox4x64-10 known answers") {
    // Reference blocks generated with an independent philox4x64-10
    // implementation (numpy.random.Philox).
    struct Vector {
        std::array<std::uint64_t, 4> ctr;
        std::array<std::uint64_t, 2> key;
        std::array<std::uint64_t, 4> out;
    };
    const std::vector<Vector> vectors = {
        {{1, 0, 0, 0}, {0, 0},
         {0x02f4ba6408e4d89bull, 0x3dd62b0b9ca8c5b2ull, 0x1c8667a55d902e79ull,
          0x907d7a052fd5b4dcull}},
        {{2, 0, 0, 0}, {0, 0},
         {0x809bf322883987c3ull, 0x471128b9e807f7ddull, 0xf250ba0dbec065b7ull,
          0xfc6ed66767a457bcull}},
        {{2, 2, 3, 4}, {5, 6},
         {0x92ab6a0e75619263ull, 0xd8ff75bdc6bf8f60ull, 0x450e124938725640ull,
          0x94eb1a7cffd20cbbull}},
        {{0, 0, 0, 0},
         {0xffffffffffffffffull, 0xffffffffffffffffull},
         {0x44b7493d1acfc229ull, 0x6636af8e997921ddull, 0x3f73e132b5b3780eull,
          0x605644dde03b01b1ull}},
        {{0x243f6a8885a30801ull, 0x13198a2e03707300ull, 0xa4093822299f3000ull,
          0x082efa98ec4e6c80ull},
         {0x452821e638d01400ull, 0xbe5466cf34e91000ull},
         {0x69cb1191c5f276acull, 0xae4698db8f7a2330ull, 0xa8abc9d306ba398full,
          0xf043802eb134aaf7ull}},
    };
    for (const auto& v : vectors) {
        CHECK(rng::philox4x64(v.ctr, v.key) == v.out);
    }
}

TEST_CASE("normal_icdf matches tabulated quantiles") {
    // Reference values from scipy.special.ndtri.
    const std::vector<std::pair<double, double>> table = {
        {1e-300, -37.0470962993612},
        {1e-12, -7.034483825301131},
        {1e-06, -4.753424308822899},
        {0.01, -2.3263478740408408},
        {0.1, -1.2815515655446004},
        {0.3, -0.5244005127080409},
        {0.425, -0.18911842627279252},
        {0.5, 0.0},
        {0.6, 0.2533471031357997},
        {0.9, 1.2815515655446004},
        {0.99, 2.3263478740408408},
        {0.999999, 4.753424308817087},
        {0.999999999999, 7.0344869100478356},
    };
    for (const auto& [p, x] : table) {
        CHECK(rng::normal_icdf(p) == doctest::Approx(x).epsilon(1e-9));
    }
    CHECK(rng::normal_icdf(0.5) == 0.0);
}

TEST_CASE("unit mapping stays inside the open interval") {
    CHECK(rng::to_unit_open(0) > 0.0);
    CHECK(rng::to_unit_open(~0ull) < 1.0);
}

TEST_CASE("streams are deterministic and lineage-disjoint") {
    rng::Stream a(42, 7, rng::kDomainEvolve, 3);
    rng::Stream b(42, 7, rng::kDomainEvolve, 3);
    rng::Stream c(42, 8, rng::kDomainEvolve, 3);
    rng::Stream d(42, 7, rng::kDomainResample, 3);
    bool all_equal = true, any_cross_equal = false;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_cross_equal = any_cross_equal || va == c.next_u64() || va == d.next_u64();
    }
    CHECK(all_equal);
    CHECK_FALSE(any_cross_equal);
}

TEST_CASE("derived lineage ids do not collide in practice") {
    std::set<std::uint64_t> ids;
    for (std::uint64_t parent = 0; parent < 500; ++parent)
        for (std::uint64_t child = 0; child < 40; ++child)
            ids.insert(rng::derive_lineage(parent, child));
    CHECK(ids.size() == 500 * 40);
}

TEST_CASE("stream normals have the right first moments") {
    rng::Stream s(123, 0, rng::kDomainGeneric, 0);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.next_normal();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
