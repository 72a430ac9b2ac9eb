#include "ct/energy_catalog.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace ct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(EnergyKind kind) {
    switch (kind) {
        case EnergyKind::Bending: return "bending";
        case EnergyKind::ExtendedBlaschke: return "extended_blaschke";
        case EnergyKind::TotalCurvatureType: return "total_curvature";
        case EnergyKind::Astigmatism: return "astigmatism";
        case EnergyKind::Exponential: return "exponential";
        case EnergyKind::QElastic: return "q_elastic";
    }
    return "unknown";
}

EnergyKind energy_kind_from_string(const std::string& name) {
    if (name == "bending") return EnergyKind::Bending;
    if (name == "extended_blaschke") return EnergyKind::ExtendedBlaschke;
    if (name == "total_curvature") return EnergyKind::TotalCurvatureType;
    if (name == "astigmatism") return EnergyKind::Astigmatism;
    if (name == "exponential") return EnergyKind::Exponential;
    if (name == "q_elastic") return EnergyKind::QElastic;
    throw ConfigError("unknown energy kind '" + name + "'");
}

double EnergySpec::domain_lo() const {
    switch (kind) {
        case EnergyKind::Bending:
        case EnergyKind::Exponential:
            return -kInf;
        case EnergyKind::ExtendedBlaschke:
        case EnergyKind::QElastic:
            return lambda;
        case EnergyKind::Astigmatism:
            return 0.0;
        case EnergyKind::TotalCurvatureType:
            if (epsilon > 0) {
                // kappa^2 + lambda > 0
                return lambda >= 0.0 ? -kInf : std::sqrt(-lambda);
            }
            // kappa^2 + lambda < 0, only possible for lambda < 0
            return lambda < 0.0 ? -std::sqrt(-lambda) : kInf;
    }
    return -kInf;
}

double EnergySpec::domain_hi() const {
    switch (kind) {
        case EnergyKind::TotalCurvatureType:
            if (epsilon > 0) return kInf; // lambda < 0 uses the right branch kappa > sqrt(-lambda)
            return lambda < 0.0 ? std::sqrt(-lambda) : -kInf;
        default:
            return kInf;
    }
}

bool EnergySpec::in_domain(double kappa) const {
    return kappa > domain_lo() && kappa < domain_hi();
}

EnergySpec EnergySpec::bending(double lambda) {
    EnergySpec s;
    s.kind = EnergyKind::Bending;
    s.lambda = lambda;
    return s;
}

EnergySpec EnergySpec::extended_blaschke(double lambda) {
    EnergySpec s;
    s.kind = EnergyKind::ExtendedBlaschke;
    s.lambda = lambda;
    return s;
}

EnergySpec EnergySpec::total_curvature(double lambda, int epsilon) {
    if (epsilon != 1 && epsilon != -1)
        throw ParameterError("total_curvature: epsilon must be +1 or -1");
    EnergySpec s;
    s.kind = EnergyKind::TotalCurvatureType;
    s.lambda = lambda;
    s.epsilon = epsilon;
    return s;
}

EnergySpec EnergySpec::astigmatism(double lambda) {
    if (lambda == 0.0) throw ParameterError("astigmatism: lambda must be nonzero");
    EnergySpec s;
    s.kind = EnergyKind::Astigmatism;
    s.lambda = lambda;
    return s;
}

EnergySpec EnergySpec::exponential(double lambda) {
    EnergySpec s;
    s.kind = EnergyKind::Exponential;
    s.lambda = lambda;
    return s;
}

EnergySpec EnergySpec::q_elastic(double lambda, double q) {
    if (q == 0.0 || q == 1.0) throw ParameterError("q_elastic: q must not be 0 or 1");
    EnergySpec s;
    s.kind = EnergyKind::QElastic;
    s.lambda = lambda;
    s.q = q;
    return s;
}

EnergyEval eval_energy(const EnergySpec& spec, double kappa) {
    if (!spec.in_domain(kappa)) {
        std::ostringstream os;
        os << "eval_energy: kappa=" << kappa << " outside domain of " << to_string(spec.kind)
           << " (lambda=" << spec.lambda << ")";
        throw DomainError(os.str());
    }
    EnergyEval e;
    switch (spec.kind) {
        case EnergyKind::Bending: {
            e.P = kappa * kappa + spec.lambda;
            e.dP = 2.0 * kappa;
            e.ddP = 2.0;
            e.dddP = 0.0;
            break;
        }
        case EnergyKind::ExtendedBlaschke: {
            const double u = kappa - spec.lambda;
            const double r = std::sqrt(u);
            e.P = r;
            e.dP = 0.5 / r;
            e.ddP = -0.25 / (u * r);
            e.dddP = 0.375 / (u * u * r);
            break;
        }
        case EnergyKind::TotalCurvatureType: {
            const double eps = static_cast<double>(spec.epsilon);
            const double w = eps * (kappa * kappa + spec.lambda);
            const double r = std::sqrt(w);
            e.P = r;
            e.dP = eps * kappa / r;
            e.ddP = spec.lambda / (w * r);
            e.dddP = -3.0 * eps * spec.lambda * kappa / (w * w * r);
            break;
        }
        case EnergyKind::Astigmatism: {
            const double l = spec.lambda;
            const double E = std::exp(l / kappa);
            const double k2 = kappa * kappa;
            e.P = kappa * E;
            e.dP = E * (1.0 - l / kappa);
            e.ddP = E * l * l / (k2 * kappa);
            e.dddP = -E * l * l * (3.0 * kappa + l) / (k2 * k2 * kappa);
            break;
        }
        case EnergyKind::Exponential: {
            const double l = spec.lambda;
            const double E = std::exp(l * kappa);
            e.P = E;
            e.dP = l * E;
            e.ddP = l * l * E;
            e.dddP = l * l * l * E;
            break;
        }
        case EnergyKind::QElastic: {
            const double q = spec.q;
            const double u = kappa - spec.lambda;
            const double uq = std::pow(u, q);
            e.P = uq;
            e.dP = q * uq / u;
            e.ddP = q * (q - 1.0) * uq / (u * u);
            e.dddP = q * (q - 1.0) * (q - 2.0) * uq / (u * u * u);
            break;
        }
    }
    e.P *= spec.scale;
    e.dP *= spec.scale;
    e.ddP *= spec.scale;
    e.dddP *= spec.scale;
    return e;
}

double p_over_dp(const EnergySpec& spec, double kappa) {
    const EnergyEval e = eval_energy(spec, kappa);
    if (e.dP == 0.0) {
        std::ostringstream os;
        os << "p_over_dp: dP vanishes at kappa=" << kappa << " for " << to_string(spec.kind);
        throw DomainError(os.str());
    }
    return e.P / e.dP;
}

WeingartenRelation WeingartenRelation::linear(double a, double b, double rho) {
    if (a == 0.0) throw ParameterError("linear Weingarten relation: a = 0 excluded");
    WeingartenRelation r;
    r.kind = Kind::Linear;
    r.a = a;
    r.b = b;
    r.ambient_rho = rho;
    return r;
}

WeingartenRelation WeingartenRelation::constant_gauss(double K_o, double rho) {
    WeingartenRelation r;
    r.kind = Kind::ConstantGauss;
    r.K_o = K_o;
    r.ambient_rho = rho;
    return r;
}

WeingartenRelation WeingartenRelation::constant_astigmatism(double c, double rho) {
    if (c == 0.0) throw ParameterError("constant astigmatism: c = 0 is totally umbilical");
    WeingartenRelation r;
    r.kind = Kind::ConstantAstigmatism;
    r.c = c;
    r.ambient_rho = rho;
    return r;
}

WeingartenRelation WeingartenRelation::constant_skew(double b, double rho) {
    WeingartenRelation r;
    r.kind = Kind::ConstantSkew;
    r.b = b;
    r.ambient_rho = rho;
    return r;
}

EnergySpec energy_from_weingarten(const WeingartenRelation& rel) {
    switch (rel.kind) {
        case WeingartenRelation::Kind::Linear: {
            if (rel.a == 0.0) throw UnsupportedRelation("linear relation with a = 0");
            if (rel.a == 1.0) return EnergySpec::exponential(-rel.b);
            const double lambda = rel.b / (rel.a - 1.0);
            const double q = rel.a / (rel.a - 1.0);
            if (q == 0.5) return EnergySpec::extended_blaschke(lambda);
            return EnergySpec::q_elastic(lambda, q);
        }
        case WeingartenRelation::Kind::ConstantSkew:
            // kappa1 - kappa2 = b is Linear with a = 1
            return EnergySpec::exponential(-rel.b);
        case WeingartenRelation::Kind::ConstantGauss: {
            const double lambda = rel.ambient_rho - rel.K_o;
            return EnergySpec::total_curvature(lambda, lambda >= 0.0 ? +1 : -1);
        }
        case WeingartenRelation::Kind::ConstantAstigmatism:
            return EnergySpec::astigmatism(1.0 / rel.c);
    }
    throw UnsupportedRelation("relation outside the catalog");
}

std::function<double(double, double)> weingarten_of(const EnergySpec& spec) {
    return [spec](double kappa1, double kappa2) {
        const double kappa = -kappa1;
        if (!spec.in_domain(kappa)) {
            std::ostringstream os;
            os << "weingarten_of: -kappa1=" << kappa << " outside domain";
            throw DomainError(os.str());
        }
        return kappa1 - kappa2 + p_over_dp(spec, kappa);
    };
}

std::string serialize(const EnergySpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "kind=" << to_string(spec.kind) << "\n";
    os << "lambda=" << spec.lambda << "\n";
    if (spec.kind == EnergyKind::QElastic) os << "q=" << spec.q << "\n";
    if (spec.kind == EnergyKind::TotalCurvatureType) os << "epsilon=" << spec.epsilon << "\n";
    if (spec.scale != 1.0) os << "scale=" << spec.scale << "\n";
    return os.str();
}

EnergySpec parse_energy_spec(std::istream& in) {
    EnergySpec spec;
    bool have_kind = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("energy spec: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "kind") {
            spec.kind = energy_kind_from_string(val);
            have_kind = true;
        } else if (key == "lambda") {
            spec.lambda = std::stod(val);
        } else if (key == "q") {
            spec.q = std::stod(val);
        } else if (key == "epsilon") {
            spec.epsilon = std::stoi(val);
        } else if (key == "scale") {
            spec.scale = std::stod(val);
        } else {
            throw ConfigError("energy spec: unknown key '" + key + "'");
        }
    }
    if (!have_kind) throw ConfigError("energy spec: missing 'kind'");
    return spec;
}

} // namespace ct
