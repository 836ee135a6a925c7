#pragma once
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fjsp/instance.hpp"

namespace fjsp::testutil {

#ifndef FJSP_DATA_DIR
#define FJSP_DATA_DIR "data"
#endif

inline std::string data_dir() { return FJSP_DATA_DIR; }

inline std::string mk_path(int index) {
    char name[32];
    std::snprintf(name, sizeof name, "/mk/Mk%02d.fjs", index);
    return data_dir() + name;
}

inline std::vector<std::string> all_benchmark_paths() {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(data_dir()))
        if (entry.is_regular_file() && entry.path().extension() == ".fjs")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    return paths;
}

// spec'd two-job example: job0 has one op {(m1,3),(m2,4)}, job1 one op {(m1,5)}
inline std::shared_ptr<const RawInstance> two_job_instance() {
    return std::make_shared<RawInstance>(parse_instance(std::string("2 2\n1 2 1 3 2 4\n1 1 1 5\n"),
                                                        "two_job"));
}

// single job, single op on machine 1, duration 7
inline std::shared_ptr<const RawInstance> one_job_instance() {
    return std::make_shared<RawInstance>(parse_instance(std::string("1 1\n1 1 1 7\n"), "one_job"));
}

inline std::shared_ptr<const RawInstance> load_shared(const std::string& path) {
    return std::make_shared<RawInstance>(load_instance(path));
}

// raw whitespace token recount, independent of the parser
inline std::vector<long long> file_tokens(const std::string& path) {
    std::ifstream in(path);
    std::vector<long long> tokens;
    std::string tok;
    while (in >> tok) {
        try {
            tokens.push_back(std::stoll(tok));
        } catch (...) {
            tokens.push_back(-1);  // fractional header value
        }
    }
    return tokens;
}

}  // namespace fjsp::testutil
