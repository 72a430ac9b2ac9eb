#include "ct/critical_profiles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ct/fourier.hpp"
#include "ct/ode.hpp"

namespace ct {

namespace {

void check_samples(int n_samples) {
    if (n_samples < 16) throw ParameterError("profile: n_samples must be >= 16");
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.98940093499164993, -0.94457502307323258, -0.86563120238783175, -0.75540440835500303,
    -0.61787624440264375, -0.45801677765722739, -0.28160355077925891, -0.09501250983763744,
    0.09501250983763744,  0.28160355077925891,  0.45801677765722739,  0.61787624440264375,
    0.75540440835500303,  0.86563120238783175,  0.94457502307323258,  0.98940093499164993};
constexpr double kGLw[kGL] = {
    0.02715245941175409, 0.06225352393864789, 0.09515851168249278, 0.12462897125553387,
    0.14959598881657673, 0.16915651939500254, 0.18260341504492359, 0.18945061045506850,
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
    0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

template <class F>
double gauss_panels(const F& f, double a, double b, int panels) {
    double total = 0.0;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double mid = lo + 0.5 * w;
        double acc = 0.0;
        for (int i = 0; i < kGL; ++i) acc += kGLw[i] * f(mid + 0.5 * w * kGLx[i]);
        total += 0.5 * w * acc;
    }
    return total;
}

CurvatureProfile sample_analytic(CurvatureProfile p, int n_samples) {
    p.kappa.resize(n_samples);
    p.kappa_s.resize(n_samples);
    const double h = p.period / n_samples;
    for (int j = 0; j < n_samples; ++j) {
        const auto v = p.analytic(j * h);
        p.kappa[j] = v[0];
        p.kappa_s[j] = v[1];
    }
    return p;
}

} // namespace

double profile_potential(const EnergySpec& spec, double rho, double kappa) {
    const EnergyEval e = eval_energy(spec, kappa);
    const double t = kappa * e.dP - e.P;
    return t * t + rho * e.dP * e.dP;
}

double first_integral_value(const EnergySpec& spec, double rho, double kappa, double kappa_s) {
    const EnergyEval e = eval_energy(spec, kappa);
    const double dPs = e.ddP * kappa_s; // dP_s = ddP * kappa_s
    const double t = kappa * e.dP - e.P;
    return dPs * dPs + t * t + rho * e.dP * e.dP;
}

double el_kappa_ss(const EnergySpec& spec, double rho, double kappa, double kappa_s) {
    const EnergyEval e = eval_energy(spec, kappa);
    if (e.ddP == 0.0) throw QuadratureFailure("el_kappa_ss: ddP vanishes");
    return (kappa * e.P - e.dP * (kappa * kappa + rho) - e.dddP * kappa_s * kappa_s) / e.ddP;
}

CurvatureProfile blaschke_profile(double rho, double lambda, double d, int n_samples,
                                  bool allow_constant) {
    check_samples(n_samples);
    const double A = rho + lambda * lambda;
    if (A <= 0.0) throw ParameterError("blaschke_profile: rho + lambda^2 must be positive");
    const double sA = std::sqrt(A);
    if (!(d >= 0.5 * (-lambda + sA))) {
        std::ostringstream os;
        os << "blaschke_profile: need d >= (-lambda+sqrt(rho+lambda^2))/2 = " << 0.5 * (-lambda + sA);
        throw ParameterError(os.str());
    }
    const double disc = 4.0 * d * d + 4.0 * lambda * d - rho;
    if (disc < 0.0) throw ParameterError("blaschke_profile: 4d^2 + 4*lambda*d - rho must be >= 0");

    const double M = 2.0 * d + lambda;
    const double B = std::sqrt(std::max(disc, 0.0));

    CurvatureProfile p;
    p.spec = EnergySpec::extended_blaschke(lambda);
    p.rho = rho;
    p.d = d;
    p.period = M_PI / sA;
    p.closed_form = true;

    if (B < 1e-12 * (1.0 + std::abs(M))) {
        if (!allow_constant)
            throw ParameterError("blaschke_profile: degenerate amplitude (constant curvature); "
                                 "pass allow_constant to accept");
        return constant_profile(p.spec, A / M + lambda, rho, p.period, n_samples);
    }

    p.analytic = [A, sA, M, B, lambda](double s) -> std::array<double, 3> {
        const double u = 2.0 * sA * s;
        const double su = std::sin(u), cu = std::cos(u);
        const double D = M - B * su;
        const double k = A / D + lambda;
        const double ks = 2.0 * A * sA * B * cu / (D * D);
        const double kss = 4.0 * A * A * B * (2.0 * B * cu * cu - D * su) / (D * D * D);
        return {k, ks, kss};
    };
    return sample_analytic(std::move(p), n_samples);
}

CurvatureProfile total_curvature_profile(double rho, double lambda, double d, int epsilon,
                                         int n_samples) {
    check_samples(n_samples);
    if (epsilon != 1 && epsilon != -1)
        throw ParameterError("total_curvature_profile: epsilon must be +1 or -1");
    const double mu = rho - lambda;
    if (mu <= 0.0) throw ParameterError("total_curvature_profile: need lambda < rho");
    const double nu = epsilon * d - lambda;
    if (nu == 0.0) throw ParameterError("total_curvature_profile: need d != epsilon*lambda");
    if (lambda * nu <= 0.0)
        throw ParameterError("total_curvature_profile: lambda*(epsilon*d - lambda) must be positive");
    if (nu >= mu)
        throw SingularDenominator("total_curvature_profile: denominator rho-lambda-(eps*d-lambda)*sin^2 "
                                  "vanishes on the period");

    const double smu = std::sqrt(mu);
    const double C = std::sqrt(lambda * nu);

    CurvatureProfile p;
    p.spec = EnergySpec::total_curvature(lambda, epsilon);
    p.rho = rho;
    p.d = d;
    p.period = 2.0 * M_PI / smu;
    p.closed_form = true;
    p.analytic = [mu, smu, nu, C](double s) -> std::array<double, 3> {
        const double u = smu * s;
        const double su = std::sin(u), cu = std::cos(u);
        const double W = mu - nu * su * su;
        const double rW = std::sqrt(W);
        const double k = C * su / rW;
        const double ks = C * mu * smu * cu / (W * rW);
        const double kss = C * mu * mu * su * (3.0 * nu * cu * cu - W) / (W * W * rW);
        return {k, ks, kss};
    };
    return sample_analytic(std::move(p), n_samples);
}

CurvatureProfile constant_profile(const EnergySpec& spec, double kappa0, double rho, double period,
                                  int n_samples) {
    check_samples(n_samples);
    if (period <= 0.0) throw ParameterError("constant_profile: period must be positive");
    CurvatureProfile p;
    p.spec = spec;
    p.rho = rho;
    p.period = period;
    p.closed_form = true;
    p.constant = true;
    p.d = spec.in_domain(kappa0) ? profile_potential(spec, rho, kappa0) : 0.0;
    p.analytic = [kappa0](double) -> std::array<double, 3> { return {kappa0, 0.0, 0.0}; };
    return sample_analytic(std::move(p), n_samples);
}

CurvatureProfile solve_profile(const EnergySpec& spec, double rho, double d, int n_samples) {
    check_samples(n_samples);
    if (n_samples % 2 != 0) throw ParameterError("solve_profile: n_samples must be even");

    // Scan window inside the domain.
    const double margin = 1e-7;
    double lo = spec.domain_lo(), hi = spec.domain_hi();
    const bool lo_open = std::isinf(lo), hi_open = std::isinf(hi);
    if (lo_open) lo = -60.0;
    else lo += margin * (1.0 + std::abs(lo));
    if (hi_open) hi = 60.0;
    else hi -= margin * (1.0 + std::abs(hi));
    if (!(lo < hi)) throw NoOscillation("solve_profile: empty domain window");

    const auto R = [&](double k) { return d - profile_potential(spec, rho, k); };

    // Locate a positive region of R bounded by sign changes on both sides.
    const int n_scan = 8192;
    const double hscan = (hi - lo) / n_scan;
    double k_lo = 0.0, k_hi = 0.0;
    bool found = false;
    int i = 0;
    while (i < n_scan) {
        // find entry into R > 0
        while (i <= n_scan && R(lo + i * hscan) <= 0.0) ++i;
        if (i > n_scan) break;
        const int enter = i;
        while (i <= n_scan && R(lo + i * hscan) > 0.0) ++i;
        const int exit = i;
        if (enter > 0 && exit <= n_scan) {
            k_lo = lo + (enter - 1) * hscan;
            k_hi = lo + exit * hscan;
            found = true;
            break;
        }
        // region touches the window edge: not an oscillation between turning points
    }
    if (!found)
        throw NoOscillation("solve_profile: level set {g(kappa) <= d} has no bounded component "
                            "with simple turning points in the domain");

    // Bisect the turning points; neg has R <= 0, pos has R > 0.
    const auto bisect = [&](double neg, double pos) {
        for (int it = 0; it < 120; ++it) {
            const double m = 0.5 * (neg + pos);
            if (R(m) > 0.0) pos = m;
            else neg = m;
        }
        return 0.5 * (neg + pos);
    };
    const double k_min = bisect(k_lo, k_lo + hscan);
    const double k_max = bisect(k_hi, k_hi - hscan);
    const double amp = k_max - k_min;
    if (amp < 1e-10) throw NoOscillation("solve_profile: degenerate turning interval");

    // Half period by endpoint-regularized quadrature, kappa = k_min + amp*sin^2(theta).
    const auto integrand = [&](double theta) {
        const double st = std::sin(theta), ct = std::cos(theta);
        const double k = k_min + amp * st * st;
        const double r = R(k);
        if (r <= 0.0) throw QuadratureFailure("solve_profile: R <= 0 inside the oscillation interval");
        const EnergyEval e = eval_energy(spec, k);
        return std::abs(e.ddP) * amp * 2.0 * st * ct / std::sqrt(r);
    };
    const double T1 = gauss_panels(integrand, 0.0, 0.5 * M_PI, 32);
    const double T2 = gauss_panels(integrand, 0.0, 0.5 * M_PI, 64);
    if (std::abs(T1 - T2) > 1e-10 * std::abs(T2))
        throw QuadratureFailure("solve_profile: turning-point quadrature did not converge");
    const double half_period = T2;

    CurvatureProfile p;
    p.spec = spec;
    p.rho = rho;
    p.d = d;
    p.period = 2.0 * half_period;
    p.kappa.resize(n_samples);
    p.kappa_s.resize(n_samples);

    // March the EL equation from the lower turning point over half a period,
    // then mirror. kappa(L-s) = kappa(s).
    const int half = n_samples / 2;
    const double hgrid = p.period / n_samples;
    const int substeps = 16;
    const double hsub = hgrid / substeps;
    using State = Eigen::Vector2d;
    const auto f = [&](double, const State& y) -> State {
        return State(y[1], el_kappa_ss(spec, rho, y[0], y[1]));
    };
    State y(k_min, 0.0);
    double s = 0.0;
    p.kappa[0] = y[0];
    p.kappa_s[0] = y[1];
    for (int j = 1; j <= half; ++j) {
        for (int m = 0; m < substeps; ++m) {
            y = dopri5_step(f, s, y, hsub);
            s += hsub;
        }
        if (!spec.in_domain(y[0]))
            throw QuadratureFailure("solve_profile: trajectory left the energy domain");
        if (j < n_samples) {
            p.kappa[j] = y[0];
            p.kappa_s[j] = y[1];
        }
    }
    if (std::abs(y[0] - k_max) > 1e-6 * (1.0 + std::abs(k_max)))
        throw QuadratureFailure("solve_profile: half-period march missed the upper turning point");
    for (int j = half + 1; j < n_samples; ++j) {
        p.kappa[j] = p.kappa[n_samples - j];
        p.kappa_s[j] = -p.kappa_s[n_samples - j];
    }
    return p;
}

double el_residual(const CurvatureProfile& profile, bool force_spectral) {
    const int n = profile.n();
    std::vector<double> kss;
    const bool use_analytic = profile.analytic && !force_spectral;
    if (!use_analytic) kss = spectral_derivative(profile.kappa, profile.period, 2);

    double worst = 0.0;
    const double h = profile.grid_step();
    for (int j = 0; j < n; ++j) {
        const double k = profile.kappa[j];
        const double ks = profile.kappa_s[j];
        const double k2 = use_analytic ? profile.analytic(j * h)[2] : kss[j];
        const EnergyEval e = eval_energy(profile.spec, k);
        const double dPss = e.ddP * k2 + e.dddP * ks * ks;
        const double r = dPss + e.dP * (k * k + profile.rho) - k * e.P;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

CurvatureProfile make_profile(const EnergySpec& spec, double rho, double d, int n_samples) {
    switch (spec.kind) {
    case EnergyKind::ExtendedBlaschke:
        return blaschke_profile(rho, spec.lambda, d, n_samples);
    case EnergyKind::TotalCurvatureType:
        return total_curvature_profile(rho, spec.lambda, d, spec.epsilon, n_samples);
    default:
        return solve_profile(spec, rho, d, n_samples);
    }
}

FirstIntegralReport first_integral_check(const CurvatureProfile& profile) {
    const int n = profile.n();
    std::vector<double> vals(n);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        vals[j] = first_integral_value(profile.spec, profile.rho, profile.kappa[j], profile.kappa_s[j]);
        sum += vals[j];
    }
    FirstIntegralReport rep;
    rep.d_est = sum / n;
    for (double v : vals) rep.deviation = std::max(rep.deviation, std::abs(v - rep.d_est));
    return rep;
}

void write_profile(const CurvatureProfile& profile, std::ostream& out) {
    out.precision(17);
    out << "# kind=" << to_string(profile.spec.kind) << " lambda=" << profile.spec.lambda
        << " rho=" << profile.rho << " d=" << profile.d << " L=" << profile.period << "\n";
    out << "# s kappa kappa_s\n";
    const double h = profile.grid_step();
    for (int j = 0; j < profile.n(); ++j)
        out << j * h << " " << profile.kappa[j] << " " << profile.kappa_s[j] << "\n";
}

} // namespace ct
