#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lsemplus/graph.hpp"
#include "lsemplus/lsem.hpp"

namespace fixture {

// Four-node example: sources 3 and 4, node 2 between them and node 1.
inline lsemplus::Dag four_node_dag() {
    return lsemplus::Dag(4, {{4, 2}, {3, 2}, {3, 1}, {2, 1}, {4, 1}});
}

inline lsemplus::LsemModel four_node_model() {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
    c(1, 3) = 0.8;  // 4 -> 2
    c(1, 2) = 0.6;  // 3 -> 2
    c(0, 2) = 0.5;  // 3 -> 1
    c(0, 1) = 0.7;  // 2 -> 1
    c(0, 3) = 0.4;  // 4 -> 1
    Eigen::VectorXd s(4);
    s << 1.0, 0.9, 1.2, 1.1;
    return lsemplus::make_model(four_node_dag(), c, s, 2.0);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::path(LSEMPLUS_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace fixture
