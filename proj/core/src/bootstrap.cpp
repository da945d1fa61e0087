#include "kappax/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace kappax {

namespace {

std::uint64_t splitmix64(std::uint64_t state) {
    state += 0x9e3779b97f4a7c15ULL;
    state = (state ^ (state >> 30)) * 0xbf58476d1ce4e5b9ULL;
    state = (state ^ (state >> 27)) * 0x94d049bb133111ebULL;
    return state ^ (state >> 31);
}

// Replicate k draws from its own substream, so the result is independent of
// how replicates are distributed over threads.
struct Substream {
    std::uint64_t state;
    explicit Substream(std::uint64_t seed, std::uint64_t replicate)
        : state(splitmix64(seed ^ splitmix64(replicate + 1))) {}

    std::uint64_t next() {
        state = splitmix64(state);
        return state;
    }

    std::size_t below(std::size_t bound) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }
};

double percentile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted.front();
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, n - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

std::optional<double> kappa_of_draw(const SubjectRows& rows, std::span<const std::size_t> draw) {
    const std::size_t C = rows.categories;
    double num = 0.0, den = 0.0;
    std::vector<double> sum_s_all(C, 0.0), sum_j_all(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        double po_num = 0.0, po_den = 0.0, sum_x = 0.0, sum_s = 0.0, sum_j = 0.0;
        for (std::size_t i : draw) {
            const double x = rows.x[i * C + c];
            const double s = rows.s[i * C + c];
            po_num += x * (x - 1.0) + (s - x) * (s - x - 1.0);
            po_den += s * (s - 1.0);
            sum_x += x;
            sum_s += s;
            sum_j += rows.j_prime[i * C + c];
        }
        if (po_den <= 0.0 || sum_s <= 0.0 || sum_j <= 0.0) continue;
        const double po = po_num / po_den;
        const double p = sum_x / sum_s;
        const double pe = 2.0 * p * p - 2.0 * p + 1.0;
        if (pe == 1.0) continue;
        const double phi = sum_s == sum_j ? 1.0 : sum_s / sum_j;
        num += rows.weights[c] * phi * (po - pe);
        den += rows.weights[c] * phi * (1.0 - pe);
    }
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

BootstrapResult bootstrap_ci(const SubjectRows& rows, const BootstrapConfig& config) {
    if (config.replicates < 100)
        fail(ErrorCode::TooFewReplicates,
             "need at least 100 replicates, got " + std::to_string(config.replicates));
    if (!(config.confidence > 0.0 && config.confidence < 1.0))
        fail(ErrorCode::MalformedConfig, "confidence must lie in (0, 1)");
    const std::size_t I = rows.subjects;

    std::vector<std::size_t> identity(I);
    for (std::size_t i = 0; i < I; ++i) identity[i] = i;
    auto point = kappa_of_draw(rows, identity);
    if (!point)
        fail(ErrorCode::UndefinedKappa, "the point estimate itself is undefined");

    const int B = config.replicates;
    std::vector<double> values(static_cast<std::size_t>(B),
                               std::numeric_limits<double>::quiet_NaN());

    auto worker = [&](int first, int last) {
        std::vector<std::size_t> draw(I);
        for (int k = first; k < last; ++k) {
            Substream stream(config.seed, static_cast<std::uint64_t>(k));
            for (std::size_t i = 0; i < I; ++i) draw[i] = stream.below(I);
            if (auto kappa = kappa_of_draw(rows, draw))
                values[static_cast<std::size_t>(k)] = *kappa;
        }
    };

    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        worker(0, B);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (B + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int first = t * chunk;
            const int last = std::min(B, first + chunk);
            if (first >= last) break;
            pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
    }

    BootstrapResult result;
    result.point = *point;
    for (double v : values) {
        if (std::isnan(v)) {
            ++result.replicates_degenerate;
        } else {
            result.replicate_values.push_back(v);
        }
    }
    result.replicates_used = static_cast<int>(result.replicate_values.size());
    if (result.replicates_used == 0)
        fail(ErrorCode::AllReplicatesDegenerate,
             "every resample produced an undefined kappa");

    std::vector<double> sorted = result.replicate_values;
    std::sort(sorted.begin(), sorted.end());
    const double alpha = (1.0 - config.confidence) / 2.0;
    result.lower = percentile(sorted, alpha);
    result.upper = percentile(sorted, 1.0 - alpha);
    return result;
}

} // namespace kappax
