#include "adt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace adt {

namespace {

constexpr double kOuterMargin = 0.01; // distance of the outermost static candidates

// Grimshaw root search settings.
constexpr int kGridPoints = 30;
constexpr int kMaxBisections = 200;
constexpr double kNearZero = 1e-8;    // relative exclusion around the trivial root t = 0
constexpr double kNearPole = 1e-10;   // relative exclusion next to t = -1/max

std::vector<double> geometric(double lo, double hi, int points) {
    std::vector<double> out;
    if (!(lo > 0.0) || !(hi > lo)) {
        return out;
    }
    const double ratio = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        out.push_back(lo * std::exp(ratio * i));
    }
    out.back() = hi;
    return out;
}

} // namespace

std::vector<double> static_threshold_candidates(std::span<const double> scores) {
    if (scores.empty()) {
        throw std::invalid_argument("static threshold search needs at least one score");
    }
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<double> cands;
    cands.reserve(sorted.size() + 1);
    cands.push_back(sorted.front() - kOuterMargin);
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        double mid = sorted[i] + (sorted[i + 1] - sorted[i]) / 2.0;
        if (!(mid > sorted[i] && mid < sorted[i + 1])) {
            mid = sorted[i]; // adjacent doubles: the lower score still separates them under '>'
        }
        cands.push_back(mid);
    }
    cands.push_back(sorted.back() + kOuterMargin);
    return cands;
}

StaticThresholdResult optimal_static_threshold(std::span<const double> scores,
                                               std::span<const Label> truths) {
    if (scores.size() != truths.size()) {
        throw std::invalid_argument("scores and truths differ in length");
    }
    if (scores.empty()) {
        throw std::invalid_argument("static threshold search needs at least one score");
    }
    // Sort (score, truth) ascending; a cut between positions keeps the upper part positive.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::size_t positives = 0;
    for (const Label t : truths) {
        if (t > 1) {
            throw std::invalid_argument("truth labels must be 0 or 1");
        }
        positives += t;
    }

    const auto cands = static_threshold_candidates(scores);
    StaticThresholdResult best;
    bool have_best = false;
    std::size_t below = 0; // points with score <= current candidate
    std::size_t tp_below = 0;
    for (const double cut : cands) {
        while (below < order.size() && scores[order[below]] <= cut) {
            tp_below += truths[order[below]];
            ++below;
        }
        ConfusionCounts c;
        c.tp = positives - tp_below;
        c.fp = (order.size() - below) - c.tp;
        c.fn = tp_below;
        c.tn = below - tp_below;
        const Metrics m = metrics(c);
        if (!have_best || m.f1 > best.metrics.f1) {
            best = {cut, c, m};
            have_best = true;
        }
    }
    return best;
}

std::vector<Label> apply_threshold(std::span<const double> scores, double threshold) {
    std::vector<Label> out;
    out.reserve(scores.size());
    for (const double s : scores) {
        out.push_back(s > threshold ? Label{1} : Label{0});
    }
    return out;
}

double gpd_log_likelihood(std::span<const double> y, double gamma, double sigma) {
    if (!(sigma > 0.0)) {
        return -std::numeric_limits<double>::infinity();
    }
    const auto n = static_cast<double>(y.size());
    if (gamma == 0.0) {
        const double sum = std::accumulate(y.begin(), y.end(), 0.0);
        return -n * std::log(sigma) - sum / sigma;
    }
    const double tau = gamma / sigma;
    double log_sum = 0.0;
    for (const double v : y) {
        const double s = 1.0 + tau * v;
        if (!(s > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        log_sum += std::log(s);
    }
    return -n * std::log(sigma) - (1.0 + 1.0 / gamma) * log_sum;
}

GpdFit fit_gpd(std::span<const double> y) {
    if (y.size() < 2) {
        throw DegenerateTailError("GPD fit needs at least two excesses");
    }
    for (const double v : y) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw DegenerateTailError("GPD excesses must be finite and positive");
        }
    }
    const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
    const double y_min = *min_it;
    const double y_max = *max_it;
    if (y_min == y_max) {
        throw DegenerateTailError("GPD fit needs excesses that are not all equal");
    }
    const auto n = static_cast<double>(y.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;

    // w(t) = u(t) v(t) - 1 with u = 1 + mean log(1 + tY), v = mean 1 / (1 + tY).
    auto w = [&](double t) {
        double log_sum = 0.0;
        double inv_sum = 0.0;
        for (const double v : y) {
            const double s = 1.0 + t * v;
            log_sum += std::log(s);
            inv_sum += 1.0 / s;
        }
        return (1.0 + log_sum / n) * (inv_sum / n) - 1.0;
    };

    // Nontrivial roots lie in (-1/y_max, 0) or (0, 2 (mean - y_min) / y_min^2).
    const double left = -1.0 / y_max;
    const double right = 2.0 * (mean - y_min) / (y_min * y_min);
    std::vector<double> grid;
    for (const double f : geometric(kNearZero, 0.5, kGridPoints)) {
        grid.push_back(left * f);
    }
    for (const double f : geometric(kNearPole, 0.5, kGridPoints)) {
        grid.push_back(left * (1.0 - f));
    }
    for (const double t : geometric(kNearZero / y_max, right, kGridPoints + 10)) {
        grid.push_back(t);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> roots;
    double prev_t = grid.front();
    double prev_w = w(prev_t);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        const double wt = w(t);
        const bool same_side = (prev_t < 0.0) == (t < 0.0);
        if (same_side && std::isfinite(prev_w) && std::isfinite(wt) && (prev_w < 0.0) != (wt < 0.0)) {
            double lo = prev_t;
            double hi = t;
            double w_lo = prev_w;
            for (int it = 0; it < kMaxBisections; ++it) {
                const double mid = lo + (hi - lo) / 2.0;
                if (mid <= lo || mid >= hi) {
                    break;
                }
                const double w_mid = w(mid);
                if ((w_mid < 0.0) == (w_lo < 0.0)) {
                    lo = mid;
                    w_lo = w_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(lo + (hi - lo) / 2.0);
        }
        prev_t = t;
        prev_w = wt;
    }

    GpdFit best{0.0, mean, gpd_log_likelihood(y, 0.0, mean), GpdMethod::exponential};
    for (const double t : roots) {
        double log_sum = 0.0;
        for (const double v : y) {
            log_sum += std::log(1.0 + t * v);
        }
        const double gamma = log_sum / n;
        const double sigma = gamma / t;
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            continue;
        }
        const double ll = gpd_log_likelihood(y, gamma, sigma);
        if (ll > best.log_likelihood) {
            best = {gamma, sigma, ll, GpdMethod::grimshaw};
        }
    }
    if (roots.empty()) {
        double var = 0.0;
        for (const double v : y) {
            var += (v - mean) * (v - mean);
        }
        var /= n - 1.0;
        const double ratio = mean * mean / var;
        const double gamma = 0.5 * (1.0 - ratio);
        const double sigma = 0.5 * mean * (ratio + 1.0);
        const double ll = gpd_log_likelihood(y, gamma, sigma);
        if (std::isfinite(ll) && ll > best.log_likelihood) {
            best = {gamma, sigma, ll, GpdMethod::moments};
        }
    }
    return best;
}

double pot_quantile(double init_threshold, double gamma, double sigma, double q,
                    std::size_t n_seen, std::size_t n_tail) {
    if (n_tail == 0 || n_seen == 0) {
        throw DegenerateTailError("tail quantile needs at least one excess");
    }
    const double r = q * static_cast<double>(n_seen) / static_cast<double>(n_tail);
    if (std::abs(gamma) < 1e-12) {
        return init_threshold - sigma * std::log(r);
    }
    return init_threshold + sigma / gamma * (std::pow(r, -gamma) - 1.0);
}

double SpotState::drift_mean() const {
    if (drift_buffer.empty()) {
        return 0.0;
    }
    return std::accumulate(drift_buffer.begin(), drift_buffer.end(), 0.0) /
           static_cast<double>(drift_buffer.size());
}

SpotState dspot_init(std::span<const double> initial_scores, const SpotConfig& cfg) {
    if (!(cfg.q > 0.0 && cfg.q < 1.0)) {
        throw std::invalid_argument("DSPOT risk level q must lie in (0, 1)");
    }
    if (!(cfg.init_quantile > 0.0 && cfg.init_quantile < 1.0)) {
        throw std::invalid_argument("DSPOT initial quantile must lie in (0, 1)");
    }
    const std::size_t d = cfg.depth;
    if (initial_scores.size() <= d + 1) {
        throw std::invalid_argument("DSPOT calibration needs more than depth + 1 scores");
    }
    for (const double s : initial_scores) {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("DSPOT calibration scores must be finite");
        }
    }

    // Each value minus the mean of the d values before it.
    std::vector<double> corrected;
    corrected.reserve(initial_scores.size() - d);
    double window_sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        window_sum += initial_scores[i];
    }
    for (std::size_t i = d; i < initial_scores.size(); ++i) {
        const double mean = d > 0 ? window_sum / static_cast<double>(d) : 0.0;
        corrected.push_back(initial_scores[i] - mean);
        if (d > 0) {
            window_sum += initial_scores[i] - initial_scores[i - d];
        }
    }

    std::vector<double> sorted = corrected;
    std::sort(sorted.begin(), sorted.end());
    const auto idx = std::min(sorted.size() - 1,
                              static_cast<std::size_t>(cfg.init_quantile * static_cast<double>(sorted.size())));

    SpotState st;
    st.q = cfg.q;
    st.depth = d;
    st.init_threshold = sorted[idx];
    for (const double v : corrected) {
        if (v > st.init_threshold) {
            st.excesses.push_back(v - st.init_threshold);
        }
    }
    if (st.excesses.size() < 2) {
        throw DegenerateTailError(
            "DSPOT calibration has too few values above the initial threshold; supply a larger "
            "calibration set or lower the initial quantile");
    }
    st.n_seen = corrected.size();
    st.n_tail = st.excesses.size();
    const GpdFit fit = fit_gpd(st.excesses);
    st.gpd_gamma = fit.gamma;
    st.gpd_sigma = fit.sigma;
    st.z_q = std::max(st.init_threshold, pot_quantile(st.init_threshold, fit.gamma, fit.sigma, st.q,
                                                      st.n_seen, st.n_tail));
    st.drift_buffer.assign(initial_scores.end() - static_cast<std::ptrdiff_t>(d), initial_scores.end());
    return st;
}

SpotStep dspot_step(SpotState& st, double score) {
    if (!std::isfinite(score)) {
        throw std::invalid_argument("DSPOT received a non-finite score");
    }
    const double drift = st.drift_mean();
    const double v = score - drift;
    SpotStep out{0, st.z_q + drift};
    if (v > st.z_q) {
        out.alarm = 1;
        return out; // alarms stay out of the tail model and the drift window
    }
    ++st.n_seen;
    if (v > st.init_threshold) {
        st.excesses.push_back(v - st.init_threshold);
        ++st.n_tail;
        try {
            const GpdFit fit = fit_gpd(st.excesses);
            st.gpd_gamma = fit.gamma;
            st.gpd_sigma = fit.sigma;
        } catch (const DegenerateTailError&) {
            // keep the previous fit
        }
    }
    st.z_q = std::max(st.init_threshold, pot_quantile(st.init_threshold, st.gpd_gamma, st.gpd_sigma,
                                                      st.q, st.n_seen, st.n_tail));
    if (st.depth > 0) {
        st.drift_buffer.push_back(score);
        if (st.drift_buffer.size() > st.depth) {
            st.drift_buffer.pop_front();
        }
    }
    return out;
}

ThresholdTrace run_dspot(std::span<const double> calibration, std::span<const double> scores,
                         const SpotConfig& cfg) {
    SpotState st = dspot_init(calibration, cfg);
    ThresholdTrace trace;
    trace.thresholds.reserve(scores.size());
    trace.predictions.reserve(scores.size());
    for (const double s : scores) {
        const SpotStep step = dspot_step(st, s);
        trace.thresholds.push_back(step.threshold);
        trace.predictions.push_back(step.alarm);
    }
    return trace;
}

} // namespace adt
