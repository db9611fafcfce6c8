#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lsemplus/metrics.hpp"

namespace lsemplus {

/// Simulation grid. Every (d, p, alpha, n) cell gets `replicates` random
/// models; each model is scored by every method for every threshold k.
struct BenchmarkGrid {
    std::vector<int> d{10};
    std::vector<double> p{0.05};
    std::vector<double> alpha{2.0};
    std::vector<int> n{1000};
    int replicates = 10;
    std::vector<int> k;                    // empty: floor(n^0.4)
    std::vector<double> epsilon{0.4};      // one ordering method per value
    std::vector<double> a{1.3};            // more than one value: a-sweep
    bool gamma_baseline = true;
    bool reversed_control = false;         // reversed true causal order
    std::uint64_t seed = 1;
};

struct BenchmarkRow {
    std::string method;
    int d = 0;
    double p = 0;
    double alpha = 0;
    int n = 0;
    int k = 0;
    double a = 0;        // NaN for methods without it
    double epsilon = 0;  // NaN for methods without it
    int replicate = 0;
    std::uint64_t seed = 0;
    SidScore sid;
};

/// Seed of the data set for grid cell `cell` and replicate `replicate`.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t cell, int replicate);

std::vector<BenchmarkRow> run_benchmark(const BenchmarkGrid& grid);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

struct BenchmarkSummary {
    std::string method;
    int d = 0;
    double p = 0;
    double alpha = 0;
    int n = 0;
    int k = 0;
    double a = 0;
    double epsilon = 0;
    int count = 0;
    double mean = 0;
    double median = 0;
};

/// Mean and median normalized SID per (method, d, p, alpha, n, k, a, epsilon).
std::vector<BenchmarkSummary> summarize(const std::vector<BenchmarkRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<BenchmarkSummary>& summary);

double median(std::vector<double> values);

}  // namespace lsemplus
