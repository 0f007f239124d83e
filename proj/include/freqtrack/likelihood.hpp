#pragma once

#include <cstddef>

#include "freqtrack/signal.hpp"

namespace freqtrack::likelihood {

/// Coefficients of the amplitude-marginalized likelihood
/// f(y|nu) = beta exp(-gamma) exp(alpha P(nu)), kept in log form.
struct LikelihoodCoefficients {
    double alpha = 0.0;     ///< N r_a / (r_b (N r_a + r_b))
    double log_beta = 0.0;  ///< -N log(pi) + (1-N) log(r_b) - log(N r_a + r_b)

    static LikelihoodCoefficients from(const Hyperparameters& hyper, std::size_t samples_per_bin);

    /// gamma_t = y^H y / r_b
    static double gamma(const ComplexRecord& record, const Hyperparameters& hyper);
};

/// lambda = 1 / (2 alpha r_nu)
double regularization(const Hyperparameters& hyper, std::size_t samples_per_bin);

/// True when nu lies in the admissible start set (-K/2, K/2].
bool in_admissible_set(double nu, int period_count);

/// log f(y_t | nu_t) with the amplitude integrated out.
double log_marginal_likelihood(const ComplexRecord& record, double nu, const Hyperparameters& hyper);

/// -sum_t P_t(nu_t). Throws std::invalid_argument on length mismatch.
double clml(const DataSet& data, const FrequencyTrack& track);

/// Ktilde + sum (nu_{t+1} - nu_t)^2 with Ktilde = 2 r_nu log K, or +inf when
/// nu_1 falls outside (-K/2, K/2].
double clp(const FrequencyTrack& track, double r_nu, int period_count);

struct CriterionValue {
    double value = 0.0;
    double lambda = 0.0;
};

/// -sum P_t(nu_t) + lambda sum (nu_{t+1} - nu_t)^2, +inf when nu_1 is not
/// admissible.
CriterionValue clpl(const DataSet& data, const FrequencyTrack& track, const Hyperparameters& hyper,
                    int period_count = 1);

/// Same criterion with lambda given directly.
double clpl_value(const DataSet& data, const FrequencyTrack& track, double lambda, int period_count = 1);

}  // namespace freqtrack::likelihood
