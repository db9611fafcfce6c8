#include "lsemplus/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "lsemplus/baseline.hpp"
#include "lsemplus/extremes.hpp"
#include "lsemplus/io.hpp"
#include "lsemplus/lsem.hpp"

namespace lsemplus {

std::uint64_t replicate_seed(std::uint64_t master, std::size_t cell, int replicate) {
    return derive_seed(derive_seed(master, cell), static_cast<std::uint64_t>(replicate));
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkGrid& grid) {
    if (grid.replicates < 1) throw std::invalid_argument("benchmark: replicates must be positive");
    if (grid.a.empty() || grid.epsilon.empty()) throw std::invalid_argument("benchmark: need a and epsilon values");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<BenchmarkRow> rows;
    std::size_t cell = 0;
    for (int d : grid.d)
        for (double p : grid.p)
            for (double alpha : grid.alpha)
                for (int n : grid.n) {
                    const std::vector<int> ks = grid.k.empty() ? std::vector<int>{default_threshold(n)} : grid.k;
                    for (int k : ks)
                        if (k < 1 || k > n) throw std::invalid_argument("benchmark: k outside 1..n");
                    for (int rep = 0; rep < grid.replicates; ++rep) {
                        const std::uint64_t seed = replicate_seed(grid.seed, cell, rep);
                        Rng rng(seed);
                        const LsemModel model = random_lsem(d, p, rng, alpha);
                        const CoefficientMatrix abar = standardize(coefficient_matrix(model), alpha);
                        const SampleMatrix raw = simulate(abar, n, alpha, rng);
                        const SampleMatrix x = pit_frechet2(raw);
                        auto emit = [&](std::string method, int k, double a, double eps, const std::vector<Node>& order) {
                            rows.push_back({std::move(method), d, p, alpha, n, k, a, eps, rep, seed,
                                            sid(model.dag, full_dag_from_order(order))});
                        };
                        for (int k : ks) {
                            for (double a : grid.a)
                                for (double eps : grid.epsilon)
                                    emit("algorithm1", k, a, eps, causal_order(x, {a, eps, k}).ancestral_order());
                            if (grid.gamma_baseline && d >= 2) emit("gamma-baseline", k, nan, nan, gamma_order(x, k));
                            if (grid.reversed_control) {
                                const auto& topo = model.dag.topological_order();
                                emit("reversed-truth", k, nan, nan, {topo.rbegin(), topo.rend()});
                            }
                        }
                    }
                    ++cell;
                }
    return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "method,d,p,alpha,n,k,a,epsilon,replicate,seed,sid_raw,sid\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.d << ',' << io::format_double(r.p) << ',' << io::format_double(r.alpha) << ','
            << r.n << ',' << r.k << ',' << io::format_double(r.a) << ',' << io::format_double(r.epsilon) << ','
            << r.replicate << ',' << r.seed << ',' << r.sid.raw << ',' << io::format_double(r.sid.normalized) << '\n';
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::vector<BenchmarkSummary> summarize(const std::vector<BenchmarkRow>& rows) {
    // NaN-free key: methods without a or epsilon store -1.
    using Key = std::tuple<std::string, int, double, double, int, int, double, double>;
    auto clean = [](double v) { return std::isnan(v) ? -1.0 : v; };
    std::map<Key, std::vector<double>> groups;
    std::vector<Key> order;
    for (const auto& r : rows) {
        Key key{r.method, r.d, r.p, r.alpha, r.n, r.k, clean(r.a), clean(r.epsilon)};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(r.sid.normalized);
    }
    std::vector<BenchmarkSummary> out;
    for (const auto& key : order) {
        const auto& v = groups.at(key);
        BenchmarkSummary s;
        std::tie(s.method, s.d, s.p, s.alpha, s.n, s.k, s.a, s.epsilon) = key;
        if (s.a < 0) s.a = std::numeric_limits<double>::quiet_NaN();
        if (s.epsilon < 0) s.epsilon = std::numeric_limits<double>::quiet_NaN();
        s.count = static_cast<int>(v.size());
        for (double x : v) s.mean += x;
        s.mean /= s.count;
        s.median = median(v);
        out.push_back(std::move(s));
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<BenchmarkSummary>& summary) {
    out << "method,d,p,alpha,n,k,a,epsilon,count,mean_sid,median_sid\n";
    for (const auto& s : summary)
        out << s.method << ',' << s.d << ',' << io::format_double(s.p) << ',' << io::format_double(s.alpha) << ','
            << s.n << ',' << s.k << ',' << io::format_double(s.a) << ',' << io::format_double(s.epsilon) << ','
            << s.count << ',' << io::format_double(s.mean) << ',' << io::format_double(s.median) << '\n';
}

}  // namespace lsemplus
