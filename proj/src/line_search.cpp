#include "freqtrack/line_search.hpp"

#include <cmath>
#include <limits>

namespace freqtrack::hyperopt {

namespace {

constexpr double kGolden = 1.6180339887498949;   // (1 + sqrt 5) / 2
constexpr double kInvGolden = 0.6180339887498949;
constexpr std::size_t kMaxExpansions = 60;
constexpr std::size_t kMaxRefinements = 200;

struct Probe {
    const std::function<double(double)>& phi;
    double sign = 1.0;
    std::size_t evaluations = 0;
    double best_t = 0.0;
    double best_value;

    double operator()(double t)
    {
        double v = phi(sign * t);
        ++evaluations;
        if (!std::isfinite(v))
            v = std::numeric_limits<double>::infinity();
        if (v < best_value) {
            best_value = v;
            best_t = t;
        }
        return v;
    }
};

struct Bracket {
    double a, b, c;
    double fa, fb, fc;
};

void golden_section(Probe& f, Bracket br, double tol)
{
    double a = br.a, c = br.c;
    double x1 = c - kInvGolden * (c - a);
    double x2 = a + kInvGolden * (c - a);
    double f1 = f(x1), f2 = f(x2);
    for (std::size_t i = 0; i < kMaxRefinements && c - a > tol; ++i) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - kInvGolden * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvGolden * (c - a);
            f2 = f(x2);
        }
    }
}

void dichotomy(Probe& f, Bracket br, double tol)
{
    double a = br.a, c = br.c;
    const double eps = 0.25 * tol;
    for (std::size_t i = 0; i < kMaxRefinements && c - a > tol; ++i) {
        const double m = 0.5 * (a + c);
        if (f(m - eps) < f(m + eps))
            c = m + eps;
        else
            a = m - eps;
    }
}

void quadratic_interp(Probe& f, Bracket br, double tol)
{
    auto [a, b, c, fa, fb, fc] = br;
    for (std::size_t i = 0; i < kMaxRefinements && c - a > tol; ++i) {
        const double num = (b - a) * (b - a) * (fb - fc) - (b - c) * (b - c) * (fb - fa);
        const double den = (b - a) * (fb - fc) - (b - c) * (fb - fa);
        double u = (den != 0.0 && std::isfinite(fa) && std::isfinite(fc)) ? b - 0.5 * num / den
                                                                           : std::numeric_limits<double>::quiet_NaN();
        const double guard = 0.1 * tol;
        // Fall back to a golden step into the larger segment when the parabola
        // is unusable or lands on top of an existing point.
        if (!std::isfinite(u) || u <= a + guard || u >= c - guard || std::abs(u - b) < guard) {
            u = (b - a > c - b) ? b - (1.0 - kInvGolden) * (b - a) : b + (1.0 - kInvGolden) * (c - b);
        }
        const double fu = f(u);
        if (fu < fb) {
            if (u < b) {
                c = b;
                fc = fb;
            } else {
                a = b;
                fa = fb;
            }
            b = u;
            fb = fu;
        } else if (u < b) {
            a = u;
            fa = fu;
        } else {
            c = u;
            fc = fu;
        }
    }
}

// Grows [0, h, ...] forward while the function keeps decreasing.
Bracket expand(Probe& f, double f0, double h, double fh)
{
    Bracket br{0.0, h, h + kGolden * h, f0, fh, 0.0};
    br.fc = f(br.c);
    for (std::size_t i = 0; i < kMaxExpansions && br.fc < br.fb; ++i) {
        br.a = br.b;
        br.fa = br.fb;
        br.b = br.c;
        br.fb = br.fc;
        br.c = br.b + kGolden * (br.b - br.a);
        br.fc = f(br.c);
    }
    return br;
}

}  // namespace

LineSearchResult line_minimize(const std::function<double(double)>& phi, double phi0, double initial_step,
                               LineSearch method, bool two_sided, double tolerance)
{
    Probe forward{phi, 1.0, 0, 0.0, phi0};
    Probe backward{phi, -1.0, 0, 0.0, phi0};
    Probe* active = &forward;
    Bracket br{};

    const double fh = forward(initial_step);
    if (fh < phi0) {
        br = expand(forward, phi0, initial_step, fh);
    } else if (two_sided) {
        const double fm = backward(initial_step);
        if (fm < phi0) {
            active = &backward;
            br = expand(backward, phi0, initial_step, fm);
        } else {
            // The minimum straddles the origin.
            br = Bracket{-initial_step, 0.0, initial_step, fm, phi0, fh};
        }
    } else {
        double prev = initial_step;
        double t = 0.5 * initial_step;
        double ft = forward(t);
        while (!(ft < phi0) && t > tolerance) {
            prev = t;
            t *= 0.5;
            ft = forward(t);
        }
        if (!(ft < phi0))
            return LineSearchResult{0.0, phi0, forward.evaluations};
        br = Bracket{0.0, t, prev, phi0, ft, std::numeric_limits<double>::infinity()};
    }

    switch (method) {
    case LineSearch::golden_section:
        golden_section(*active, br, tolerance);
        break;
    case LineSearch::dichotomy:
        dichotomy(*active, br, tolerance);
        break;
    case LineSearch::quadratic_interp:
        quadratic_interp(*active, br, tolerance);
        break;
    }

    LineSearchResult r{0.0, phi0, forward.evaluations + backward.evaluations};
    if (forward.best_value < r.value) {
        r.step = forward.best_t;
        r.value = forward.best_value;
    }
    if (backward.best_value < r.value) {
        r.step = -backward.best_t;
        r.value = backward.best_value;
    }
    return r;
}

}  // namespace freqtrack::hyperopt
