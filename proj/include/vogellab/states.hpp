#pragma once

/// Analytic models of Fock-diagonal optical states in the quadrature
/// convention where the vacuum has variance 1/4 (characteristic function
/// exp(-nu^2/8)). Closed forms are used for the photon/vacuum mixture and
/// the geometric (Diosi) mixture; everything else goes through stable
/// Hermite/Laguerre recurrences.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vogellab {

inline constexpr double kWeightSumTol = 1e-12;

/// Truncation level from which the geometric mixture is numerically
/// indistinguishable (< 1e-9) from its untruncated closed forms.
inline constexpr int kDiosiClosedFormMinN = 30;

enum class ProfileTag { generic, mixture, diosi };

/// Dispatch hint: which closed-form family (if any) describes the weights.
struct AnalyticProfile {
    ProfileTag tag = ProfileTag::generic;
    std::optional<double> eta;  // single-photon fraction, mixture only
};

class FockDiagonalState {
  public:
    /// Generic state from Fock-basis probabilities w[0..n_max].
    explicit FockDiagonalState(std::vector<double> weights)
        : FockDiagonalState(std::move(weights), AnalyticProfile{}) {}

    FockDiagonalState(std::vector<double> weights, AnalyticProfile profile)
        : weights_(std::move(weights)), profile_(profile) {
        validate();
    }

    const std::vector<double>& weights() const noexcept { return weights_; }
    int n_max() const noexcept { return static_cast<int>(weights_.size()) - 1; }
    const AnalyticProfile& profile() const noexcept { return profile_; }

  private:
    void validate() const {
        if (weights_.empty())
            throw std::invalid_argument("FockDiagonalState: empty weight vector");
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0))
                throw std::invalid_argument("FockDiagonalState: negative or non-finite weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kWeightSumTol)
            throw std::invalid_argument("FockDiagonalState: weights must sum to 1 within 1e-12");
        switch (profile_.tag) {
            case ProfileTag::mixture: {
                if (!profile_.eta)
                    throw std::invalid_argument("mixture profile requires eta");
                const double eta = *profile_.eta;
                if (weights_.size() < 2 || weights_[0] != 1.0 - eta || weights_[1] != eta)
                    throw std::invalid_argument("mixture profile: weights must be (1-eta, eta, 0, ...)");
                for (std::size_t i = 2; i < weights_.size(); ++i)
                    if (weights_[i] != 0.0)
                        throw std::invalid_argument("mixture profile: weights must be (1-eta, eta, 0, ...)");
                break;
            }
            case ProfileTag::diosi:
                if (weights_[0] != 0.0)
                    throw std::invalid_argument("diosi profile: vacuum weight must be 0");
                break;
            case ProfileTag::generic:
                if (profile_.eta)
                    throw std::invalid_argument("generic profile must not carry eta");
                break;
        }
    }

    std::vector<double> weights_;
    AnalyticProfile profile_;
};

/// rho = eta |1><1| + (1 - eta) |0><0|.
inline FockDiagonalState make_photon_vacuum_mixture(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("make_photon_vacuum_mixture: eta must be in [0, 1]");
    return FockDiagonalState({1.0 - eta, eta}, AnalyticProfile{ProfileTag::mixture, eta});
}

/// Geometric Fock mixture sum_n 2^-n |n><n| truncated at n_max and
/// renormalized by 1/(1 - 2^-n_max). Weight of the vacuum is zero.
inline FockDiagonalState make_diosi_state(int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("make_diosi_state: n_max must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
    const double norm = 1.0 - std::ldexp(1.0, -n_max);
    for (int n = 1; n <= n_max; ++n) w[static_cast<std::size_t>(n)] = std::ldexp(1.0, -n) / norm;
    return FockDiagonalState(std::move(w), AnalyticProfile{ProfileTag::diosi, std::nullopt});
}

namespace detail {

inline bool diosi_closed_form(const FockDiagonalState& s) {
    return s.profile().tag == ProfileTag::diosi && s.n_max() >= kDiosiClosedFormMinN;
}

/// psi_n(x)^2 for n = 0..n_max, with psi_n the oscillator eigenfunction in
/// the vacuum-variance-1/4 convention: psi_n(x) = 2^(1/4) h_n(sqrt(2) x),
/// h_n the normalized Hermite function. Three-term recurrence, no factorials.
inline std::vector<double> hermite_psi_sq(int n_max, double x) {
    const double u = std::sqrt(2.0) * x;
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    double hm = 0.0;
    double h = 0.75112554446494251;  // pi^(-1/4)
    h *= std::exp(-0.5 * u * u);
    out[0] = std::sqrt(2.0) * h * h;
    for (int n = 0; n < n_max; ++n) {
        const double hn = std::sqrt(2.0 / (n + 1)) * u * h - std::sqrt(double(n) / (n + 1)) * hm;
        hm = h;
        h = hn;
        out[static_cast<std::size_t>(n) + 1] = std::sqrt(2.0) * h * h;
    }
    return out;
}

/// sum_n w_n s_n L_n(z) exp(-z/2) with s_n = (-1)^n when alternate is set.
/// The recurrence runs on the exp(-z/2)-scaled values, which stay in [-1, 1].
inline double scaled_laguerre_sum(const std::vector<double>& w, double z, bool alternate) {
    double lm = 0.0;
    double l = std::exp(-0.5 * z);  // L_0(z) e^{-z/2}
    double acc = w[0] * l;
    double sign = 1.0;
    for (std::size_t n = 0; n + 1 < w.size(); ++n) {
        const double ln = ((2.0 * double(n) + 1.0 - z) * l - double(n) * lm) / (double(n) + 1.0);
        lm = l;
        l = ln;
        if (alternate) sign = -sign;
        acc += w[n + 1] * sign * l;
    }
    return acc;
}

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite argument");
}

}  // namespace detail

/// Phase-independent quadrature density pr(x).
inline double marginal_pdf(const FockDiagonalState& s, double x) {
    detail::require_finite(x, "marginal_pdf");
    constexpr double kSqrt2OverPi = 0.79788456080286536;
    if (s.profile().tag == ProfileTag::mixture) {
        const double eta = *s.profile().eta;
        return kSqrt2OverPi * (1.0 - eta + 4.0 * eta * x * x) * std::exp(-2.0 * x * x);
    }
    if (detail::diosi_closed_form(s)) {
        return 2.0 * std::sqrt(2.0 / (3.0 * M_PI)) * std::exp(-2.0 * x * x / 3.0) -
               kSqrt2OverPi * std::exp(-2.0 * x * x);
    }
    const auto psi2 = detail::hermite_psi_sq(s.n_max(), x);
    double acc = 0.0;
    for (std::size_t n = 0; n < psi2.size(); ++n) acc += s.weights()[n] * psi2[n];
    return acc;
}

/// Wigner function W(x, p). Laguerre series for generic weights, closed
/// forms for the mixture and the (well-truncated) geometric mixture.
inline double wigner(const FockDiagonalState& s, double x, double p) {
    detail::require_finite(x, "wigner");
    detail::require_finite(p, "wigner");
    const double r2 = x * x + p * p;
    if (s.profile().tag == ProfileTag::mixture) {
        const double eta = *s.profile().eta;
        return M_2_PI * (4.0 * eta * r2 + 1.0 - 2.0 * eta) * std::exp(-2.0 * r2);
    }
    if (detail::diosi_closed_form(s)) {
        return (4.0 / (3.0 * M_PI)) * std::exp(-2.0 * r2 / 3.0) - M_2_PI * std::exp(-2.0 * r2);
    }
    return M_2_PI * detail::scaled_laguerre_sum(s.weights(), 4.0 * r2, true);
}

/// Characteristic function F[pr](nu), the Fourier image of the marginal.
/// Real-valued for every Fock-diagonal state; F(0) = 1.
inline std::complex<double> char_fn(const FockDiagonalState& s, double nu) {
    detail::require_finite(nu, "char_fn");
    if (s.profile().tag == ProfileTag::mixture) {
        const double eta = *s.profile().eta;
        return {(1.0 - eta * nu * nu / 4.0) * std::exp(-nu * nu / 8.0), 0.0};
    }
    if (detail::diosi_closed_form(s)) {
        return {2.0 * std::exp(-3.0 * nu * nu / 8.0) - std::exp(-nu * nu / 8.0), 0.0};
    }
    // Per-level closed form: F_n(nu) = L_n(nu^2/4) exp(-nu^2/8).
    return {detail::scaled_laguerre_sum(s.weights(), nu * nu / 4.0, false), 0.0};
}

/// Mean-square quadrature deviation; (2n+1)/4 per Fock level.
inline double variance(const FockDiagonalState& s) {
    if (s.profile().tag == ProfileTag::mixture) return 0.25 + 0.5 * *s.profile().eta;
    double acc = 0.0;
    for (std::size_t n = 0; n < s.weights().size(); ++n)
        acc += s.weights()[n] * (2.0 * double(n) + 1.0) / 4.0;
    return acc;
}

/// Binomial loss channel on the diagonal: each photon survives with
/// probability `transmission`. n_max is preserved.
inline FockDiagonalState apply_loss(const FockDiagonalState& s, double transmission) {
    if (!(transmission >= 0.0 && transmission <= 1.0))
        throw std::invalid_argument("apply_loss: transmission must be in [0, 1]");
    if (transmission == 1.0) return s;
    const double t = transmission;
    if (s.profile().tag == ProfileTag::mixture) {
        const double eta = *s.profile().eta * t;
        std::vector<double> w(s.weights().size(), 0.0);
        w[0] = 1.0 - eta;
        w[1] = eta;
        return FockDiagonalState(std::move(w), AnalyticProfile{ProfileTag::mixture, eta});
    }
    const int n_max = s.n_max();
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    // Pascal row per source level m; C(m, n) is exact in double up to m = 56
    // and correct to ~1 ulp beyond, far inside the 1e-12 contract.
    std::vector<double> binom{1.0};
    for (int m = 0; m <= n_max; ++m) {
        const double wm = s.weights()[static_cast<std::size_t>(m)];
        if (wm > 0.0)
            for (int n = 0; n <= m; ++n)
                out[static_cast<std::size_t>(n)] +=
                    wm * binom[static_cast<std::size_t>(n)] * std::pow(t, n) * std::pow(1.0 - t, m - n);
        binom.push_back(1.0);
        for (int n = m; n >= 1; --n) binom[static_cast<std::size_t>(n)] += binom[static_cast<std::size_t>(n) - 1];
    }
    double sum = 0.0;
    for (double w : out) sum += w;
    for (double& w : out) w /= sum;
    return FockDiagonalState(std::move(out));
}

/// Frequency maximizing the mixture's excess over the vacuum bound:
/// nu_opt^2 = 8 (1 + eta) / eta.
inline double nu_opt(double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("nu_opt: eta must be in (0, 1]");
    return std::sqrt(8.0 * (1.0 + eta) / eta);
}

/// Peak excess D_eta(nu_opt) = 2 eta exp(-(1 + eta)/eta); positive for all
/// eta in (0, 1], which is the mixture's unconditional nonclassicality.
inline double vogel_gap(double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("vogel_gap: eta must be in (0, 1]");
    return 2.0 * eta * std::exp(-(1.0 + eta) / eta);
}

/// Canonical spec string for a state (mix:<eta> | diosi:<nmax> | fock:<w,...>).
inline std::string state_spec_string(const FockDiagonalState& s) {
    char buf[32];
    std::ostringstream os;
    switch (s.profile().tag) {
        case ProfileTag::mixture:
            std::snprintf(buf, sizeof buf, "%.17g", *s.profile().eta);
            os << "mix:" << buf;
            break;
        case ProfileTag::diosi:
            os << "diosi:" << s.n_max();
            break;
        case ProfileTag::generic:
            os << "fock:";
            for (std::size_t n = 0; n < s.weights().size(); ++n) {
                std::snprintf(buf, sizeof buf, "%.17g", s.weights()[n]);
                os << (n ? "," : "") << buf;
            }
            break;
    }
    return os.str();
}

}  // namespace vogellab
