#include "arproc/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw DomainError(msg);
}

// Synthetic division of p by (s - root); assumes the remainder is negligible.
Poly deflate(const Poly& p, Complex root) {
    const auto& c = p.coeffs();
    if (c.size() < 2) return Poly();
    std::vector<Complex> q(c.size() - 1);
    Complex carry = c.back();
    for (int k = int(c.size()) - 2; k >= 0; --k) {
        q[k] = carry;
        carry = c[k] + carry * root;
    }
    return Poly(std::move(q));
}

}  // namespace

Poly RationalLST::denominator() const { return Poly::from_roots(poles); }

Complex RationalLST::denom_at(Complex s) const {
    Complex d = 1.0;
    for (Complex p : poles) d *= (s - p);
    return d;
}

Complex RationalLST::eval(Complex s) const { return numerator(s) / denom_at(s); }

void RationalLST::validate() const {
    require(!poles.empty(), "RationalLST: at least one pole required");
    for (Complex p : poles) require(p.real() < 0.0, "RationalLST: poles must have Re < 0");
    // conjugate closure
    std::vector<bool> used(poles.size(), false);
    for (size_t i = 0; i < poles.size(); ++i) {
        if (used[i] || std::abs(poles[i].imag()) < 1e-14 * (1.0 + std::abs(poles[i]))) continue;
        bool matched = false;
        for (size_t j = 0; j < poles.size(); ++j) {
            if (j == i || used[j]) continue;
            if (std::abs(poles[j] - std::conj(poles[i])) < 1e-10 * (1.0 + std::abs(poles[i]))) {
                used[i] = used[j] = true;
                matched = true;
                break;
            }
        }
        require(matched, "RationalLST: pole list not closed under conjugation");
    }
    require(numerator.degree() <= int(poles.size()) - 1,
            "RationalLST: numerator degree must be below pole count");
    Complex at0 = eval(0.0);
    require(std::abs(at0 - Complex(1.0)) < 1e-9, "RationalLST: Phi(0) must equal 1");
    for (Complex p : poles)
        require(std::abs(numerator(p)) > 1e-9 * (1.0 + numerator.max_abs_coeff()),
                "RationalLST: numerator shares a zero with the denominator");
}

DistSpec DistSpec::Exponential(double rate) {
    require(rate > 0.0, "Exponential: rate must be positive");
    DistSpec d;
    d.kind_ = DistKind::Exponential;
    d.rates_ = {rate};
    return d;
}

DistSpec DistSpec::Erlang(int shape, double rate) {
    require(shape >= 1, "Erlang: shape must be >= 1");
    require(rate > 0.0, "Erlang: rate must be positive");
    DistSpec d;
    d.kind_ = DistKind::Erlang;
    d.shape_ = shape;
    d.rates_ = {rate};
    return d;
}

DistSpec DistSpec::HyperExponential(std::vector<double> weights, std::vector<double> rates) {
    require(!weights.empty() && weights.size() == rates.size(),
            "HyperExponential: weights and rates must match and be non-empty");
    double total = 0.0;
    for (double w : weights) {
        require(w >= 0.0, "HyperExponential: weights must be non-negative");
        total += w;
    }
    require(std::fabs(total - 1.0) < 1e-12, "HyperExponential: weights must sum to 1");
    for (double r : rates) require(r > 0.0, "HyperExponential: rates must be positive");
    DistSpec d;
    d.kind_ = DistKind::HyperExponential;
    d.weights_ = std::move(weights);
    d.rates_ = std::move(rates);
    return d;
}

DistSpec DistSpec::CoxianChain(std::vector<double> rates, std::vector<double> exit_probs) {
    require(!rates.empty() && rates.size() == exit_probs.size(),
            "CoxianChain: rates and exit probabilities must match and be non-empty");
    for (double r : rates) require(r > 0.0, "CoxianChain: rates must be positive");
    for (double q : exit_probs) require(q >= 0.0 && q <= 1.0, "CoxianChain: exit probs in [0,1]");
    require(std::fabs(exit_probs.back() - 1.0) < 1e-12, "CoxianChain: final exit prob must be 1");
    DistSpec d;
    d.kind_ = DistKind::CoxianChain;
    d.rates_ = std::move(rates);
    d.weights_ = std::move(exit_probs);
    return d;
}

DistSpec DistSpec::Deterministic(double value) {
    require(value >= 0.0, "Deterministic: value must be non-negative");
    DistSpec d;
    d.kind_ = DistKind::Deterministic;
    d.value_ = value;
    return d;
}

DistSpec DistSpec::Uniform(double lo, double hi) {
    require(lo >= 0.0 && hi > lo, "Uniform: need 0 <= lo < hi");
    DistSpec d;
    d.kind_ = DistKind::Uniform;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
}

DistSpec DistSpec::RawRational(Poly numerator, std::vector<Complex> poles) {
    DistSpec d;
    d.kind_ = DistKind::RawRational;
    d.raw_num_ = std::move(numerator);
    d.raw_poles_ = std::move(poles);
    RationalLST lst{d.raw_num_, d.raw_poles_};
    lst.validate();
    return d;
}

bool DistSpec::rational() const {
    return kind_ != DistKind::Deterministic && kind_ != DistKind::Uniform;
}

RationalLST DistSpec::lst() const {
    switch (kind_) {
        case DistKind::Exponential: {
            double mu = rates_[0];
            return {Poly({mu}), {Complex(-mu)}};
        }
        case DistKind::Erlang: {
            double mu = rates_[0];
            std::vector<Complex> poles(size_t(shape_), Complex(-mu));
            return {Poly({std::pow(mu, shape_)}), poles};
        }
        case DistKind::HyperExponential: {
            // sum_i w_i mu_i / (s + mu_i) over the common denominator
            std::vector<Complex> poles;
            for (double r : rates_) poles.push_back(Complex(-r));
            Poly num;
            for (size_t i = 0; i < rates_.size(); ++i) {
                Poly part({weights_[i] * rates_[i]});
                for (size_t j = 0; j < rates_.size(); ++j)
                    if (j != i) part = part * Poly({rates_[j], 1.0});
                num = num + part;
            }
            RationalLST out{num, poles};
            // cancel numerator zeros that hit poles (e.g. duplicated rates)
            for (size_t i = 0; i < out.poles.size();) {
                if (std::abs(out.numerator(out.poles[i])) <
                        1e-12 * (1.0 + out.numerator.max_abs_coeff()) &&
                    out.numerator.degree() >= 1) {
                    out.numerator = deflate(out.numerator, out.poles[i]);
                    out.poles.erase(out.poles.begin() + i);
                } else {
                    ++i;
                }
            }
            return out;
        }
        case DistKind::CoxianChain: {
            const auto& mu = rates_;
            const auto& q = weights_;
            std::vector<Complex> poles;
            for (double r : mu) poles.push_back(Complex(-r));
            Poly num;
            double reach = 1.0;   // prob of entering phase i
            double scale = 1.0;   // prod of rates through phase i
            for (size_t i = 0; i < mu.size(); ++i) {
                scale *= mu[i];
                double w = reach * q[i];
                if (w > 0.0) {
                    Poly part({w * scale});
                    for (size_t j = i + 1; j < mu.size(); ++j) part = part * Poly({mu[j], 1.0});
                    num = num + part;
                }
                reach *= (1.0 - q[i]);
            }
            return {num, poles};
        }
        case DistKind::RawRational:
            return {raw_num_, raw_poles_};
        default:
            throw NotRational("lst_of: Deterministic/Uniform laws have no rational LST");
    }
}

Complex DistSpec::lst_eval(Complex s) const {
    switch (kind_) {
        case DistKind::Deterministic:
            return std::exp(-s * value_);
        case DistKind::Uniform: {
            double width = hi_ - lo_;
            if (std::abs(s) < 1e-8) {
                // series around 0: 1 - s*(lo+hi)/2 + s^2*(lo^2+lo*hi+hi^2)/6
                return 1.0 - s * 0.5 * (lo_ + hi_) +
                       s * s * (lo_ * lo_ + lo_ * hi_ + hi_ * hi_) / 6.0;
            }
            return (std::exp(-s * lo_) - std::exp(-s * hi_)) / (s * width);
        }
        case DistKind::Exponential: {
            double mu = rates_[0];
            return mu / (s + mu);
        }
        case DistKind::Erlang: {
            double mu = rates_[0];
            return std::pow(mu / (s + mu), shape_);
        }
        case DistKind::HyperExponential: {
            Complex acc = 0.0;
            for (size_t i = 0; i < rates_.size(); ++i)
                acc += weights_[i] * rates_[i] / (s + rates_[i]);
            return acc;
        }
        case DistKind::CoxianChain: {
            Complex acc = 0.0;
            Complex through = 1.0;
            double reach = 1.0;
            for (size_t i = 0; i < rates_.size(); ++i) {
                through *= rates_[i] / (s + rates_[i]);
                acc += reach * weights_[i] * through;
                reach *= (1.0 - weights_[i]);
            }
            return acc;
        }
        case DistKind::RawRational: {
            RationalLST r{raw_num_, raw_poles_};
            return r.eval(s);
        }
    }
    throw DomainError("lst_eval: unknown kind");
}

double DistSpec::lst_deriv(double s) const {
    const double h = 1e-100;
    return lst_eval(Complex(s, h)).imag() / h;
}

double DistSpec::mean() const {
    switch (kind_) {
        case DistKind::Exponential:
            return 1.0 / rates_[0];
        case DistKind::Erlang:
            return shape_ / rates_[0];
        case DistKind::HyperExponential: {
            double m = 0.0;
            for (size_t i = 0; i < rates_.size(); ++i) m += weights_[i] / rates_[i];
            return m;
        }
        case DistKind::CoxianChain: {
            double m = 0.0, reach = 1.0;
            for (size_t i = 0; i < rates_.size(); ++i) {
                m += reach / rates_[i];
                reach *= (1.0 - weights_[i]);
            }
            return m;
        }
        case DistKind::Deterministic:
            return value_;
        case DistKind::Uniform:
            return 0.5 * (lo_ + hi_);
        case DistKind::RawRational:
            return -lst_deriv(0.0);
    }
    throw DomainError("mean: unknown kind");
}

double DistSpec::cdf(double x) const {
    if (x < 0.0) return 0.0;
    switch (kind_) {
        case DistKind::Exponential:
            return -std::expm1(-rates_[0] * x);
        case DistKind::Erlang: {
            double mu = rates_[0];
            double term = 1.0, sum = 1.0;
            for (int j = 1; j < shape_; ++j) {
                term *= mu * x / j;
                sum += term;
            }
            return 1.0 - std::exp(-mu * x) * sum;
        }
        case DistKind::HyperExponential: {
            double f = 0.0;
            for (size_t i = 0; i < rates_.size(); ++i)
                f += weights_[i] * -std::expm1(-rates_[i] * x);
            return f;
        }
        case DistKind::Deterministic:
            return x >= value_ ? 1.0 : 0.0;
        case DistKind::Uniform:
            return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0);
        case DistKind::CoxianChain:
        case DistKind::RawRational: {
            // density sum_j c_j exp(s_j x) with c_j = N(s_j)/D'(s_j), simple poles
            RationalLST r = lst();
            Poly dden = r.denominator().derivative();
            Complex acc = 0.0;
            for (Complex p : r.poles) {
                Complex dp = dden(p);
                if (std::abs(dp) < 1e-12)
                    throw DomainError("cdf: repeated poles unsupported for this kind");
                Complex c = r.numerator(p) / dp;
                acc += c * (std::exp(p * x) - 1.0) / p;
            }
            return std::clamp(acc.real(), 0.0, 1.0);
        }
    }
    throw DomainError("cdf: unknown kind");
}

double DistSpec::sample(RngStream& rng) const {
    auto unit = [&] { return rng.uniform(); };
    auto draw_exp = [&](double rate) { return -std::log(unit()) / rate; };
    switch (kind_) {
        case DistKind::Exponential:
            return draw_exp(rates_[0]);
        case DistKind::Erlang: {
            double t = 0.0;
            for (int j = 0; j < shape_; ++j) t += draw_exp(rates_[0]);
            return t;
        }
        case DistKind::HyperExponential: {
            double u = unit(), acc = 0.0;
            for (size_t i = 0; i < weights_.size(); ++i) {
                acc += weights_[i];
                if (u <= acc || i + 1 == weights_.size()) return draw_exp(rates_[i]);
            }
            return draw_exp(rates_.back());
        }
        case DistKind::CoxianChain: {
            double t = 0.0;
            for (size_t i = 0; i < rates_.size(); ++i) {
                t += draw_exp(rates_[i]);
                if (unit() <= weights_[i]) break;
            }
            return t;
        }
        case DistKind::Deterministic:
            return value_;
        case DistKind::Uniform:
            return lo_ + unit() * (hi_ - lo_);
        case DistKind::RawRational:
            throw DomainError("sample: RawRational specs are not simulable");
    }
    throw DomainError("sample: unknown kind");
}

Complex DistSpec::integrate_against(const std::function<Complex(double)>& g,
                                    const QuadRule& rule) const {
    switch (kind_) {
        case DistKind::Deterministic:
            return g(value_);
        case DistKind::Uniform: {
            double width = hi_ - lo_;
            return integrate([&](double x) { return g(x) / width; }, lo_, hi_, rule);
        }
        case DistKind::Exponential: {
            double mu = rates_[0];
            return integrate([&](double x) { return g(x) * mu * std::exp(-mu * x); }, 0.0, kInf,
                             rule);
        }
        case DistKind::Erlang: {
            double mu = rates_[0];
            int k = shape_;
            double lognorm = k * std::log(mu) - std::lgamma(double(k));
            return integrate(
                [&](double x) {
                    return g(x) * std::exp(lognorm + (k - 1) * std::log(x) - mu * x);
                },
                0.0, kInf, rule);
        }
        case DistKind::HyperExponential: {
            return integrate(
                [&](double x) {
                    double d = 0.0;
                    for (size_t i = 0; i < rates_.size(); ++i)
                        d += weights_[i] * rates_[i] * std::exp(-rates_[i] * x);
                    return g(x) * d;
                },
                0.0, kInf, rule);
        }
        case DistKind::CoxianChain:
        case DistKind::RawRational: {
            RationalLST r = lst();
            Poly dden = r.denominator().derivative();
            std::vector<Complex> coeff;
            for (Complex p : r.poles) {
                Complex dp = dden(p);
                if (std::abs(dp) < 1e-12)
                    throw DomainError("integrate_against: repeated poles unsupported");
                coeff.push_back(r.numerator(p) / dp);
            }
            return integrate(
                [&](double x) {
                    Complex d = 0.0;
                    for (size_t j = 0; j < coeff.size(); ++j)
                        d += coeff[j] * std::exp(r.poles[j] * x);
                    return g(x) * d.real();
                },
                0.0, kInf, rule);
        }
    }
    throw DomainError("integrate_against: unknown kind");
}

DistSpec DistSpec::with_distinct_poles(double eps, bool* perturbed) const {
    if (perturbed) *perturbed = false;
    if (kind_ == DistKind::Erlang && shape_ > 1) {
        std::vector<double> rates(static_cast<size_t>(shape_));
        std::vector<double> exits(size_t(shape_), 0.0);
        for (int j = 0; j < shape_; ++j) rates[j] = rates_[0] * (1.0 + eps * j);
        exits.back() = 1.0;
        if (perturbed) *perturbed = true;
        return CoxianChain(std::move(rates), std::move(exits));
    }
    if (!rational()) return *this;
    // verify distinctness for the remaining kinds
    RationalLST r = lst();
    for (size_t i = 0; i < r.poles.size(); ++i)
        for (size_t j = i + 1; j < r.poles.size(); ++j)
            if (std::abs(r.poles[i] - r.poles[j]) < 1e-9 * (1.0 + std::abs(r.poles[i])))
                throw DomainError(
                    "with_distinct_poles: repeated poles in a non-Erlang spec; merge or "
                    "perturb the input");
    return *this;
}

}  // namespace arproc
