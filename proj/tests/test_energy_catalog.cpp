#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "ct/energy_catalog.hpp"

using namespace ct;

namespace {

std::vector<EnergySpec> catalog_members() {
    return {
        EnergySpec::bending(0.5),
        EnergySpec::extended_blaschke(-1.0),
        EnergySpec::total_curvature(3.0, +1),
        EnergySpec::total_curvature(-1.0, -1),
        EnergySpec::astigmatism(0.5),
        EnergySpec::exponential(1.5),
        EnergySpec::q_elastic(0.2, 1.0 / 3.0),
    };
}

// Interior sample points of each member's domain.
std::vector<double> domain_samples(const EnergySpec& spec) {
    double lo = spec.domain_lo(), hi = spec.domain_hi();
    if (std::isinf(lo)) lo = -2.0;
    if (std::isinf(hi)) hi = lo + 4.0;
    std::vector<double> out;
    for (int i = 1; i < 12; ++i) out.push_back(lo + (hi - lo) * i / 12.0);
    return out;
}

} // namespace

TEST_CASE("eval_energy closed forms at pinned points") {
    // bending, polynomial
    auto e = eval_energy(EnergySpec::bending(0.0), 3.0);
    CHECK(e.P == doctest::Approx(9.0));
    CHECK(e.dP == doctest::Approx(6.0));
    CHECK(e.ddP == doctest::Approx(2.0));
    CHECK(e.dddP == doctest::Approx(0.0));

    // sqrt(kappa) at kappa = 4
    e = eval_energy(EnergySpec::extended_blaschke(0.0), 4.0);
    CHECK(e.P == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.dP == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(e.ddP == doctest::Approx(-0.03125).epsilon(1e-14));
    CHECK(e.dddP == doctest::Approx(0.01171875).epsilon(1e-14));

    // exp(kappa) at 0
    e = eval_energy(EnergySpec::exponential(1.0), 0.0);
    CHECK(e.P == doctest::Approx(1.0));
    CHECK(e.dP == doctest::Approx(1.0));
    CHECK(e.ddP == doctest::Approx(1.0));
    CHECK(e.dddP == doctest::Approx(1.0));
}

TEST_CASE("domain enforcement fails loudly") {
    CHECK_THROWS_AS(eval_energy(EnergySpec::extended_blaschke(1.0), 0.5), DomainError);
    CHECK_THROWS_AS(eval_energy(EnergySpec::astigmatism(1.0), -2.0), DomainError);
    CHECK_THROWS_AS(eval_energy(EnergySpec::total_curvature(-4.0, +1), 1.0), DomainError);
    CHECK_NOTHROW(eval_energy(EnergySpec::total_curvature(-4.0, +1), 3.0));
    CHECK_NOTHROW(eval_energy(EnergySpec::total_curvature(-4.0, -1), 1.0));
}

TEST_CASE("derivatives agree with central differences") {
    for (const auto& spec : catalog_members()) {
        for (double k : domain_samples(spec)) {
            const auto e = eval_energy(spec, k);
            for (double h : {1e-3, 1e-4}) {
                if (!spec.in_domain(k - h) || !spec.in_domain(k + h)) continue;
                const auto ep = eval_energy(spec, k + h);
                const auto em = eval_energy(spec, k - h);
                const double scale = 1.0 + std::abs(e.P) + std::abs(e.dP) + std::abs(e.ddP) +
                                     std::abs(e.dddP);
                CHECK(std::abs((ep.P - em.P) / (2 * h) - e.dP) < 50.0 * scale * h * h);
                CHECK(std::abs((ep.dP - em.dP) / (2 * h) - e.ddP) < 50.0 * scale * h * h);
                CHECK(std::abs((ep.ddP - em.ddP) / (2 * h) - e.dddP) < 200.0 * scale * h * h);
            }
        }
    }
}

TEST_CASE("energy_from_weingarten catalog map") {
    // kappa1 = -kappa2 + 2 is extended Blaschke with lambda = -1
    auto s = energy_from_weingarten(WeingartenRelation::linear(-1.0, 2.0));
    CHECK(s.kind == EnergyKind::ExtendedBlaschke);
    CHECK(s.lambda == doctest::Approx(-1.0));

    // constant Gauss K_o = 1 in rho = 4: lambda = rho - K_o = 3
    s = energy_from_weingarten(WeingartenRelation::constant_gauss(1.0, 4.0));
    CHECK(s.kind == EnergyKind::TotalCurvatureType);
    CHECK(s.lambda == doctest::Approx(3.0));

    // kappa1 = kappa2 + 2: exponential with lambda = -2
    s = energy_from_weingarten(WeingartenRelation::linear(1.0, 2.0));
    CHECK(s.kind == EnergyKind::Exponential);
    CHECK(s.lambda == doctest::Approx(-2.0));

    s = energy_from_weingarten(WeingartenRelation::constant_astigmatism(2.0));
    CHECK(s.kind == EnergyKind::Astigmatism);
    CHECK(s.lambda == doctest::Approx(0.5));

    CHECK_THROWS_AS(WeingartenRelation::linear(0.0, 1.0), ParameterError);
}

TEST_CASE("weingarten_of residual vanishes on pinned loci") {
    auto r = weingarten_of(EnergySpec::extended_blaschke(0.0));
    CHECK(r(-1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14)); // P/dP = 2*kappa

    auto re = weingarten_of(EnergySpec::exponential(2.0));
    CHECK(re(0.7 - 0.5, 0.7) == doctest::Approx(0.0).epsilon(1e-14)); // P/dP = 1/2

    auto rb = weingarten_of(EnergySpec::bending(0.0));
    CHECK(rb(-2.0, -1.0) == doctest::Approx(0.0).epsilon(1e-14)); // P/dP = kappa/2
}

TEST_CASE("round trip: relation locus of the recovered energy") {
    for (const auto& spec : catalog_members()) {
        auto res = weingarten_of(spec);
        for (double k : domain_samples(spec)) {
            EnergyEval e = eval_energy(spec, k);
            if (std::abs(e.dP) < 1e-9) continue;
            const double k1 = -k;
            const double k2 = k1 + e.P / e.dP;
            CHECK(std::abs(res(k1, k2)) < 1e-12 * (1.0 + std::abs(k2)));
        }
    }
}

TEST_CASE("scaling P by a constant leaves the relation unchanged") {
    for (const auto& base : catalog_members()) {
        auto r0 = weingarten_of(base);
        for (double mu : {0.5, 3.0}) {
            EnergySpec scaled = base;
            scaled.scale = mu;
            auto r1 = weingarten_of(scaled);
            for (double k : domain_samples(base)) {
                if (std::abs(eval_energy(base, k).dP) < 1e-9) continue;
                const double k2 = 0.3;
                CHECK(std::abs(r0(-k, k2) - r1(-k, k2)) < 1e-14 * (1.0 + std::abs(r0(-k, k2))));
            }
        }
    }
}

TEST_CASE("serialization round trip") {
    const auto spec = EnergySpec::q_elastic(0.25, 1.0 / 3.0);
    std::stringstream ss(serialize(spec));
    const auto back = parse_energy_spec(ss);
    CHECK(back.kind == spec.kind);
    CHECK(back.lambda == doctest::Approx(spec.lambda).epsilon(1e-16));
    CHECK(back.q == doctest::Approx(spec.q).epsilon(1e-16));
}
