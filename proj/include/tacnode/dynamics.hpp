#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "tacnode/error.hpp"
#include "tacnode/finite_kernel.hpp"

namespace tacnode {

/// SplitMix64, used to expand seeds.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t s) : s_(s) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t s_;
};

/// xoshiro256** with explicit uniform and exponential draws so that
/// trajectories do not depend on the standard library's distributions.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    /// Independent stream for trial `index` under a master seed.
    static Xoshiro256 for_stream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 sm(seed);
        std::uint64_t a = sm.next();
        SplitMix64 mix(a ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
        return Xoshiro256(mix.next());
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// uniform on [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

/// Interlacing array x_k^m, 1 <= k <= m <= M, stored as x2 = 2x.
class ParticleConfig {
public:
    ParticleConfig() = default;
    explicit ParticleConfig(int M) : M_(M), x2_(static_cast<size_t>(M) * (M + 1) / 2, 0) {}

    int levels() const { return M_; }
    int& at(int m, int k) { return x2_[offset(m) + k - 1]; }
    int at(int m, int k) const { return x2_[offset(m) + k - 1]; }
    const std::vector<int>& raw() const { return x2_; }

    bool operator==(const ParticleConfig&) const = default;

    static size_t offset(int m) { return static_cast<size_t>(m - 1) * m / 2; }

private:
    int M_ = 0;
    std::vector<int> x2_;
};

inline ParticleConfig init_config(int M) {
    if (M < 1) throw DomainError("need at least one level");
    ParticleConfig c(M);
    for (int m = 1; m <= M; ++m)
        for (int k = 1; k <= m; ++k) c.at(m, k) = 2 * k - m - 1;
    return c;
}

/// True when every level is strictly increasing, on the grid, and interlaces with the level below.
inline bool check_invariants(const ParticleConfig& c) {
    for (int m = 1; m <= c.levels(); ++m) {
        for (int k = 1; k <= m; ++k) {
            if (((c.at(m, k) + m + 1) & 1) != 0) return false;
            if (k > 1 && c.at(m, k - 1) >= c.at(m, k)) return false;
            if (m > 1 && k < m) {
                if (!(c.at(m, k) < c.at(m - 1, k) && c.at(m - 1, k) < c.at(m, k + 1))) return false;
            }
        }
    }
    return true;
}

enum class Direction { left, right };

/// One clock ring of particle (m, k). Returns false when the jump was blocked.
inline bool apply_jump_inplace(ParticleConfig& c, int m, int k, Direction dir) {
    const int M = c.levels();
    if (m < 1 || m > M || k < 1 || k > m) throw IndexError("particle index out of range");
    if (dir == Direction::right) {
        if (m >= 2 && k <= m - 1 && c.at(m, k) + 1 == c.at(m - 1, k)) return false;
        const int x0 = c.at(m, k);
        c.at(m, k) += 2;
        for (int l = 1; m + l <= M && c.at(m + l, k + l) == x0 + l; ++l) c.at(m + l, k + l) += 2;
    } else {
        if (m >= 2 && k >= 2 && c.at(m, k) == c.at(m - 1, k - 1) + 1) return false;
        const int x0 = c.at(m, k);
        c.at(m, k) -= 2;
        for (int l = 1; m + l <= M && c.at(m + l, k) == x0 - l; ++l) c.at(m + l, k) -= 2;
    }
    return true;
}

inline ParticleConfig apply_jump(ParticleConfig c, int m, int k, Direction dir) {
    apply_jump_inplace(c, m, k, dir);
    return c;
}

struct SimConfig {
    int levels = 1;
    double eps_rate = 0.5;
    double t_end = 0.0;
    long trials = 1;
    std::uint64_t seed = 0;
};

inline void check_sim_config(const SimConfig& p) {
    if (p.levels < 1) throw DomainError("levels must be positive");
    if (!(p.eps_rate > 0.0 && p.eps_rate < 1.0)) throw DomainError("eps_rate must lie in (0,1)");
    if (!(p.t_end >= 0.0) || !std::isfinite(p.t_end)) throw DomainError("t_end must be finite and nonnegative");
    if (p.trials < 1) throw DomainError("trials must be positive");
}

/// Gillespie simulation up to t_end. Odd levels jump right at rate 1/eps and
/// left at rate eps; even levels the other way round.
inline ParticleConfig run(ParticleConfig c, const SimConfig& p, Xoshiro256& rng) {
    const int M = c.levels();
    const long n = static_cast<long>(M) * (M + 1) / 2;
    const double fast = 1.0 / p.eps_rate, slow = p.eps_rate;
    const double R = (fast + slow) * static_cast<double>(n);
    const double p_fast = fast / (fast + slow);
    double time = 0.0;
    while (true) {
        time += rng.exponential(R);
        if (time > p.t_end) return c;
        const long idx = static_cast<long>(rng.below(static_cast<std::uint64_t>(n)));
        // level m holds indices [m(m-1)/2, m(m+1)/2)
        int m = static_cast<int>((std::sqrt(8.0 * idx + 1.0) - 1.0) / 2.0) + 1;
        while (static_cast<long>(ParticleConfig::offset(m)) > idx) --m;
        while (static_cast<long>(ParticleConfig::offset(m + 1)) <= idx) ++m;
        const int k = static_cast<int>(idx - static_cast<long>(ParticleConfig::offset(m))) + 1;
        const bool is_fast = rng.uniform() < p_fast;
        const bool right = (m % 2 == 1) ? is_fast : !is_fast;
        apply_jump_inplace(c, m, k, right ? Direction::right : Direction::left);
    }
}

struct SiteStat {
    double freq = 0.0;
    double std_err = 0.0;
};

enum class TargetKind { pair, endpoint };

/// Joint event: all `points` occupied (pair), or each point occupied with
/// the site two levels above empty (endpoint).
struct Target {
    TargetKind kind = TargetKind::pair;
    std::vector<GridPoint> points;
};

struct SimResult {
    long trials = 0;
    std::map<GridPoint, SiteStat> occupancy;
    std::vector<SiteStat> targets;
    std::vector<ParticleConfig> snapshots;  // terminal configurations of the first trials
};

namespace detail {

inline bool occupied(const ParticleConfig& c, const GridPoint& p) {
    if (p.m < 1 || p.m > c.levels()) return false;
    for (int k = 1; k <= p.m; ++k)
        if (c.at(p.m, k) == p.x2) return true;
    return false;
}

inline SiteStat bernoulli_stat(long hits, long n) {
    const double f = static_cast<double>(hits) / static_cast<double>(n);
    return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(n))};
}

}  // namespace detail

inline void check_targets(const SimConfig& p, const std::vector<Target>& targets) {
    for (const auto& t : targets) {
        for (const auto& q : t.points) {
            if (!on_grid(q) || q.m > p.levels) throw TargetOutOfRange("target point is not a simulated site");
            if (t.kind == TargetKind::endpoint && q.m + 2 > p.levels)
                throw TargetOutOfRange("endpoint target needs level m + 2 to be simulated");
        }
    }
}

/// Runs all trials; per-trial streams come from (seed, trial index).
inline SimResult simulate(const SimConfig& p, const std::vector<Target>& targets = {}, long keep_snapshots = 0) {
    check_sim_config(p);
    check_targets(p, targets);
    const int M = p.levels;
    const ParticleConfig start = init_config(M);
    std::vector<std::map<int, long>> hist(M + 1);
    std::vector<long> hits(targets.size(), 0);
    SimResult res;
    res.trials = p.trials;
    for (long trial = 0; trial < p.trials; ++trial) {
        Xoshiro256 rng = Xoshiro256::for_stream(p.seed, static_cast<std::uint64_t>(trial));
        const ParticleConfig c = run(start, p, rng);
        for (int m = 1; m <= M; ++m)
            for (int k = 1; k <= m; ++k) ++hist[m][c.at(m, k)];
        for (size_t i = 0; i < targets.size(); ++i) {
            bool ok = true;
            for (const auto& q : targets[i].points) {
                ok = ok && detail::occupied(c, q);
                if (targets[i].kind == TargetKind::endpoint) ok = ok && !detail::occupied(c, {q.m + 2, q.x2});
            }
            hits[i] += ok ? 1 : 0;
        }
        if (trial < keep_snapshots) res.snapshots.push_back(c);
    }
    for (int m = 1; m <= M; ++m) {
        if (hist[m].empty()) continue;
        const int lo = hist[m].begin()->first, hi = hist[m].rbegin()->first;
        for (int x2 = lo; x2 <= hi; x2 += 2) {
            auto it = hist[m].find(x2);
            res.occupancy[GridPoint{m, x2}] = detail::bernoulli_stat(it == hist[m].end() ? 0 : it->second, p.trials);
        }
    }
    for (size_t i = 0; i < targets.size(); ++i) res.targets.push_back(detail::bernoulli_stat(hits[i], p.trials));
    return res;
}

inline std::map<GridPoint, SiteStat> estimate_occupancy(const SimConfig& p) { return simulate(p).occupancy; }

inline std::vector<SiteStat> estimate_pair_and_endpoints(const SimConfig& p, const std::vector<Target>& targets) {
    return simulate(p, targets).targets;
}

}  // namespace tacnode
