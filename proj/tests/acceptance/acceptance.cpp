#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "mmwb/verify.hpp"

int main(int argc, char** argv) {
    mmwb::VerifyOptions opt;
    std::vector<std::string> ids;
    for (int k = 1; k < argc; ++k) {
        if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) {
            ids.emplace_back(argv[++k]);
        } else if (std::strcmp(argv[k], "--seed") == 0 && k + 1 < argc) {
            opt.seed = std::stoull(argv[++k]);
        } else {
            std::cerr << "usage: acceptance [--only ID]... [--seed S]\n";
            return 2;
        }
    }
    if (ids.empty()) ids = mmwb::criterion_ids();

    bool all = true;
    for (const auto& id : ids) {
        mmwb::CheckResult r = mmwb::run_criterion(id, opt);
        all = all && r.pass;
        const char* tag = !r.reproducible ? "NOTE" : (r.pass ? "PASS" : "FAIL");
        std::cout << tag << " criterion " << r.id << ": " << r.title << ": " << r.summary << " (" << r.seconds << " s)\n";
        for (const auto& n : r.notes) std::cout << "    " << n << "\n";
        std::cout.flush();
    }
    return all ? 0 : 1;
}
