#include <cmath>

#include "doctest.h"
#include "freqtrack/errors.hpp"
#include "freqtrack/hmm.hpp"
#include "freqtrack/likelihood.hpp"
#include "freqtrack/oracle.hpp"
#include "test_support.hpp"

using namespace freqtrack;
using namespace freqtrack::hmm;
using markov::make_grid;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo, double hi)
{
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = testing::uniform(rng, lo, hi);
    return m;
}

struct Model {
    markov::FrequencyGrid grid;
    ObservationTable obs;
    markov::TransitionMatrix trans;
    markov::InitialDistribution init;
};

// Random small model whose grid covers (-1/2, 1/2] so that several states are admissible.
Model random_model(std::mt19937_64& rng, std::size_t bins, std::size_t states)
{
    auto grid = make_grid(-0.9, 0.4, states);
    auto obs = ObservationTable::from_log(random_matrix(rng, bins, states, -30.0, 0.0));
    auto trans = markov::transition_matrix(grid, std::pow(10.0, testing::uniform(rng, -1.5, 0.5)));
    auto init = markov::initial_distribution(grid, 1);
    return {grid, std::move(obs), std::move(trans), std::move(init)};
}

double path_cost(const Matrix& cost, const markov::FrequencyGrid& grid, double lambda,
                 const std::vector<std::size_t>& path)
{
    double c = cost(0, path[0]);
    for (std::size_t t = 1; t < path.size(); ++t) {
        const double d = grid.state(path[t]) - grid.state(path[t - 1]);
        c += cost(t, path[t]) + lambda * d * d;
    }
    return c;
}

}  // namespace

TEST_CASE("observation table rows match the likelihood module")
{
    std::mt19937_64 rng(41);
    const auto data = testing::random_dataset(rng, 4, 4);
    const auto grid = make_grid(-2.0, 2.0, 9);
    const Hyperparameters h{2.0, 0.3, 0.1};
    const auto obs = observation_table(data, grid, h);
    for (std::size_t t = 0; t < 4; ++t) {
        double best = -1e300;
        for (std::size_t p = 0; p < 9; ++p) {
            const double direct = likelihood::log_marginal_likelihood(data[t], grid.state(p), h);
            CHECK(testing::rel_err(obs.log_obs(t, p), direct) < 1e-12);
            CHECK(obs.scaled(t, p) == doctest::Approx(std::exp(direct - obs.row_shift[t])));
            best = std::max(best, obs.scaled(t, p));
        }
        CHECK(best == 1.0);
        // Grid spacing 0.5: states p and p + 2 differ by exactly one cycle.
        for (std::size_t p = 0; p + 2 < 9; ++p)
            CHECK(testing::rel_err(obs.log_obs(t, p), obs.log_obs(t, p + 2)) < 1e-12);
    }
}

TEST_CASE("noiseless cisoid peaks at its grid state")
{
    SimulationOptions opts;
    opts.fixed_amplitude = Complex(1.0, 0.0);
    const auto grid = make_grid(-0.5, 0.5, 21);
    const auto data = synthesize_dataset(FrequencyTrack{{0.2}}, Hyperparameters{1.0, 0.0, 1.0}, 4, 1, opts);
    const auto obs = observation_table(data, grid, Hyperparameters{1.0, 0.1, 1.0});
    std::size_t arg = 0;
    for (std::size_t p = 1; p < 21; ++p)
        if (obs.log_obs(0, p) > obs.log_obs(0, arg))
            arg = p;
    CHECK(grid.state(arg) == doctest::Approx(0.2));
}

TEST_CASE("forward with one bin")
{
    std::mt19937_64 rng(42);
    const auto m = random_model(rng, 1, 5);
    const auto fb = forward(m.obs, m.trans, m.init);
    double sum = 0.0;
    for (std::size_t p = 0; p < 5; ++p)
        sum += std::exp(m.obs.log_obs(0, p)) * m.init.probabilities[p];
    CHECK(testing::rel_err(fb.log_likelihood, std::log(sum)) < 1e-12);
}

TEST_CASE("forward-backward matches brute force enumeration")
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t bins = 1 + trial % 5;
        const std::size_t states = 2 + (trial / 5) % 5;
        const auto m = random_model(rng, bins, states);
        const auto fb = forward_backward(m.obs, m.trans, m.init);
        const auto bf = brute_force_joint(m.obs, m.trans, m.init);
        CHECK(testing::rel_err(fb.log_likelihood, bf.log_likelihood) < 1e-10);
        const auto post = posterior_marginals(fb, m.obs, m.trans);
        CHECK(testing::max_abs_diff(post.singles, bf.singles) < 1e-10);
        REQUIRE(post.pairs.size() == bf.pairs.size());
        for (std::size_t t = 0; t < post.pairs.size(); ++t)
            CHECK(testing::max_abs_diff(post.pairs[t], bf.pairs[t]) < 1e-10);
    }
}

TEST_CASE("normalization invariants")
{
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_model(rng, 6, 7);
        const auto fb = forward_backward(m.obs, m.trans, m.init);
        const auto post = posterior_marginals(fb, m.obs, m.trans);
        double ll = 0.0;
        for (std::size_t t = 0; t < 6; ++t) {
            ll += std::log(fb.normalizers[t]) + m.obs.row_shift[t];
            double f = 0.0, s = 0.0;
            for (std::size_t p = 0; p < 7; ++p) {
                f += fb.forward(t, p);
                s += post.singles(t, p);
            }
            CHECK(std::abs(f - 1.0) < 1e-10);
            CHECK(std::abs(s - 1.0) < 1e-10);
        }
        CHECK(testing::rel_err(ll, fb.log_likelihood) < 1e-12);
        for (std::size_t p = 0; p < 7; ++p)
            CHECK(fb.backward(5, p) == 1.0);
        for (std::size_t t = 1; t < 6; ++t) {
            const auto& pr = post.pairs[t - 1];
            for (std::size_t p = 0; p < 7; ++p) {
                double over_prev = 0.0, over_next = 0.0;
                for (std::size_t q = 0; q < 7; ++q) {
                    over_prev += pr(q, p);
                    over_next += pr(p, q);
                }
                CHECK(std::abs(over_prev - post.singles(t, p)) < 1e-10);
                CHECK(std::abs(over_next - post.singles(t - 1, p)) < 1e-10);
            }
        }
        const auto total = expected_transitions(fb, m.obs, m.trans);
        Matrix summed(7, 7);
        for (const auto& pr : post.pairs)
            for (std::size_t i = 0; i < 49; ++i)
                summed(i / 7, i % 7) += pr(i / 7, i % 7);
        CHECK(testing::max_abs_diff(total, summed) < 1e-12);
        CHECK(testing::max_abs_diff(posterior_singles(fb), post.singles) < 1e-15);
    }
}

TEST_CASE("rescaling observations shifts the likelihood only")
{
    std::mt19937_64 rng(45);
    const auto m = random_model(rng, 5, 6);
    Matrix lifted = m.obs.log_obs;
    const double log_c = 1.7;
    for (std::size_t t = 0; t < 5; ++t)
        for (std::size_t p = 0; p < 6; ++p)
            lifted(t, p) += log_c;
    const auto a = forward(m.obs, m.trans, m.init);
    const auto b = forward(ObservationTable::from_log(lifted), m.trans, m.init);
    CHECK(b.log_likelihood - a.log_likelihood == doctest::Approx(5 * log_c).epsilon(1e-12));
    CHECK(testing::max_abs_diff(a.forward, b.forward) < 1e-15);
}

TEST_CASE("backward with two bins by hand")
{
    Matrix log_obs(2, 2);
    log_obs(0, 0) = std::log(0.3);
    log_obs(0, 1) = std::log(0.6);
    log_obs(1, 0) = std::log(0.2);
    log_obs(1, 1) = std::log(0.9);
    const auto obs = ObservationTable::from_log(log_obs);
    const auto grid = make_grid(-0.25, 0.25, 2);
    const auto trans = markov::transition_matrix(grid, 0.1);
    const auto init = markov::initial_distribution(grid, 1);
    const auto fb = forward_backward(obs, trans, init);
    for (std::size_t p = 0; p < 2; ++p) {
        const double expected =
            (obs.scaled(1, 0) * trans(p, 0) + obs.scaled(1, 1) * trans(p, 1)) / fb.normalizers[1];
        CHECK(fb.backward(0, p) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("deterministic chain gives one-hot posteriors")
{
    const auto grid = make_grid(-0.4, 0.6, 6);
    const auto trans = markov::transition_matrix(grid, 1e-6);
    markov::InitialDistribution init{std::vector<double>(6, 0.0)};
    init.probabilities[2] = 1.0;
    std::mt19937_64 rng(46);
    const auto obs = ObservationTable::from_log(random_matrix(rng, 4, 6, -2.0, 0.0));
    const auto fb = forward_backward(obs, trans, init);
    const auto singles = posterior_singles(fb);
    for (std::size_t t = 0; t < 4; ++t)
        CHECK(singles(t, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform model gives uniform posteriors")
{
    const auto grid = make_grid(-0.4, 0.6, 5);
    const auto trans = markov::transition_matrix(grid, 1e12);
    markov::InitialDistribution init{std::vector<double>(5, 0.2)};
    const auto obs = ObservationTable::from_log(Matrix(3, 5, -1.0));
    const auto bf = brute_force_joint(obs, trans, init);
    for (double v : bf.singles.data())
        CHECK(v == doctest::Approx(0.2).epsilon(1e-9));
    const auto single = brute_force_joint(ObservationTable::from_log(Matrix(1, 5, -1.0)), trans, init);
    CHECK(single.log_likelihood == doctest::Approx(-1.0));
}

TEST_CASE("forward reports underflow")
{
    Matrix log_obs(2, 3, 0.0);
    const auto grid = make_grid(-0.5, 0.5, 3);
    markov::InitialDistribution init{{0.0, 1.0, 0.0}};
    // The only reachable state at t = 2 has zero likelihood.
    log_obs(1, 0) = -INFINITY;
    log_obs(1, 2) = -INFINITY;
    log_obs(1, 1) = 0.0;
    auto obs = ObservationTable::from_log(log_obs);
    auto trans = markov::transition_matrix(grid, 1e-8);
    for (std::size_t q = 0; q < 3; ++q)
        for (std::size_t p = 0; p < 3; ++p)
            trans.probabilities(q, p) = (p == 0) ? 1.0 : 0.0;
    CHECK_THROWS_AS(forward(obs, trans, init), NumericalError);
    CHECK_THROWS_AS(brute_force_joint(ObservationTable::from_log(Matrix(8, 7, 0.0)), trans, init),
                    std::invalid_argument);
}

TEST_CASE("viterbi matches exhaustive search")
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t bins = 1 + trial % 5;
        const std::size_t states = 2 + (trial / 5) % 5;
        const auto grid = make_grid(-0.9, 0.4, states);
        const auto cost = random_matrix(rng, bins, states, -5.0, 0.0);
        const double lambda = std::pow(10.0, testing::uniform(rng, -1.0, 1.5));
        const auto v = viterbi(cost, grid, lambda);
        const auto bf = brute_force_viterbi(cost, grid, lambda);
        CHECK(v.path == bf.path);
        CHECK(testing::rel_err(v.cost, bf.cost) < 1e-10);
        CHECK(testing::rel_err(v.cost, path_cost(cost, grid, lambda, v.path)) < 1e-12);
    }
    const auto grid = make_grid(-0.5, 1.0, 4);
    const auto cost = random_matrix(rng, 3, 4, -5.0, 0.0);
    CHECK(viterbi(cost, grid, 2.0).path == brute_force_viterbi(cost, grid, 2.0).path);
}

TEST_CASE("viterbi with a huge lambda picks the best constant path")
{
    std::mt19937_64 rng(48);
    const auto grid = make_grid(-2.0, 2.0, 17);
    const auto cost = random_matrix(rng, 6, 17, -5.0, 0.0);
    const auto v = viterbi(cost, grid, 1e9);
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t p : markov::admissible_states(grid, 1)) {
        double s = 0.0;
        for (std::size_t t = 0; t < 6; ++t)
            s += cost(t, p);
        if (s < best) {
            best = s;
            arg = p;
        }
    }
    CHECK(v.path == std::vector<std::size_t>(6, arg));
}

TEST_CASE("viterbi ties go to the lowest admissible index")
{
    const auto grid = make_grid(-2.0, 2.0, 17);
    const auto v = viterbi(Matrix(5, 17, -1.0), grid, 3.0);
    const auto first = markov::admissible_states(grid, 1).front();
    CHECK(v.path == std::vector<std::size_t>(5, first));
    CHECK(v.cost == doctest::Approx(-5.0));
}

TEST_CASE("viterbi beats random admissible paths")
{
    std::mt19937_64 rng(49);
    const auto grid = make_grid(-2.5, 2.5, 40);
    const auto cost = random_matrix(rng, 12, 40, -8.0, 0.0);
    const double lambda = 5.0;
    const auto v = viterbi(cost, grid, lambda);
    const auto inside = markov::admissible_states(grid, 1);
    std::uniform_int_distribution<std::size_t> any(0, 39), start(0, inside.size() - 1);
    for (int k = 0; k < 1000; ++k) {
        std::vector<std::size_t> path(12);
        path[0] = inside[start(rng)];
        for (std::size_t t = 1; t < 12; ++t)
            path[t] = k % 2 ? any(rng) : std::min<std::size_t>(39, path[t - 1] + any(rng) % 3);
        CHECK(v.cost <= path_cost(cost, grid, lambda, path) + 1e-12);
    }
}

TEST_CASE("viterbi argument checks")
{
    const auto grid = make_grid(1.0, 2.0, 4);
    CHECK_THROWS_AS(viterbi(Matrix(2, 4), grid, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(viterbi(Matrix(2, 4), make_grid(-0.5, 0.5, 4), 0.0), std::invalid_argument);
    const auto track = path_to_track(std::vector<std::size_t>{0, 3}, grid);
    CHECK(track.values == std::vector<double>{1.0, 2.0});
}
