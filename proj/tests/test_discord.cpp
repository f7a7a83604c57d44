#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ncp/discord.hpp"

using namespace ncp;
using ncp::testutil::max_diff;

namespace {

DensityMatrix bell_state() {
    CMatrix v(4, 1);
    v(0, 0) = v(3, 0) = 1.0 / std::sqrt(2.0);
    return DensityMatrix(v * v.adjoint());
}

// classically correlated on the second side, skewed on the first
DensityMatrix hh_dv_mixture() {
    CMatrix m = tensor(named_state("H").mat, named_state("H").mat) * cx(0.5) +
                tensor(named_state("D").mat, named_state("V").mat) * cx(0.5);
    return DensityMatrix(m);
}

}  // namespace

TEST_CASE("von neumann entropy") {
    REQUIRE(von_neumann_entropy(named_state("D").mat) == Catch::Approx(0.0).margin(1e-10));
    REQUIRE(von_neumann_entropy(CMatrix::identity(2) * cx(0.5)) == Catch::Approx(1.0));
    CMatrix m(2, 2, {0.75, 0, 0, 0.25});
    REQUIRE(von_neumann_entropy(m) == Catch::Approx(0.811278).margin(1e-6));
    REQUIRE(von_neumann_entropy(CMatrix::identity(4) * cx(0.25)) == Catch::Approx(2.0));
    CMatrix neg(2, 2, {1.2, 0, 0, -0.2});
    REQUIRE_THROWS(von_neumann_entropy(neg));
}

TEST_CASE("mutual information") {
    REQUIRE(mutual_information(bell_state()) == Catch::Approx(2.0).margin(1e-9));
    DensityMatrix prod(tensor(named_state("H").mat, named_state("D").mat));
    REQUIRE(mutual_information(prod) == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(mutual_information(hh_dv_mixture()) > 0.0);
}

TEST_CASE("discord of the Bell state") {
    DiscordResult d1 = discord(bell_state(), Side::second, 16, 32);
    DiscordResult d2 = discord(bell_state(), Side::first, 16, 32);
    REQUIRE(d1.value == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(d2.value == Catch::Approx(1.0).margin(1e-6));

    // maximally entangled: every measurement basis is equally (un)informative
    for (const auto& [t, p, v] : discord_landscape(bell_state(), Side::second, 8, 8))
        REQUIRE(v == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("one-sided classical mixture") {
    DensityMatrix rho = hh_dv_mixture();

    DiscordResult dab = discord(rho, Side::second);
    REQUIRE(dab.value == Catch::Approx(0.0).margin(1e-7));

    DiscordResult dba = discord(rho, Side::first);
    REQUIRE(dba.value == Catch::Approx(0.2018).margin(5e-3));

    ZeroDiscordStructure z = zero_discord_structure(rho, Side::second);
    REQUIRE(z.found);
    REQUIRE(max_diff(z.basis.proj0, named_state("H").mat) < 1e-4);
    REQUIRE(max_diff(z.basis.proj1, named_state("V").mat) < 1e-4);

    ZeroDiscordStructure za = zero_discord_structure(rho, Side::first);
    REQUIRE_FALSE(za.found);
}

TEST_CASE("fully classical state has no discord") {
    CMatrix m(4, 4);
    m(0, 0) = 0.4;
    m(1, 1) = 0.1;
    m(2, 2) = 0.2;
    m(3, 3) = 0.3;
    DensityMatrix rho(m);
    REQUIRE(discord(rho, Side::second, 16, 32).value == Catch::Approx(0.0).margin(1e-6));
    REQUIRE(discord(rho, Side::first, 16, 32).value == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("discord is non-negative") {
    std::mt19937_64 rng(301);
    for (int k = 0; k < 120; ++k) {
        DensityMatrix rho = random_mixed_state(rng, 4);
        DiscordResult d = discord(rho, Side::second, 12, 24);
        REQUIRE(d.value >= -1e-7);
    }
}
