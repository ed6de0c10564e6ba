// Benchmark comparing the serial path against the OpenMP-parallel path on
// the three data-parallel kernels: tower construction + identity suites,
// orbit enumeration, and specialization sampling. The outputs of both paths
// are compared; they must be identical.

#include "bloch/config_space.hpp"
#include "bloch/func_field.hpp"
#include "bloch/parallel.hpp"
#include "bloch/scissors.hpp"

#include <chrono>
#include <iostream>

using namespace bloch;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
std::pair<double, std::string> timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    std::string digest = f();
    return {seconds_since(t0), digest};
}

std::string report_digest(const Report& r) { return r.to_json(); }

}  // namespace

int main(int argc, char** argv) {
    int threads = 4;
    if (argc > 1) threads = std::atoi(argv[1]);

    struct Case {
        const char* name;
        std::function<std::string()> run;
    };
    std::vector<Case> cases = {
        {"cocycle suite F_13",
         [] {
             ScissorsTower t(FiniteLocalRing::make("F_13"));
             return report_digest(t.verify_cocycle_suite());
         }},
        {"key identity Z/121",
         [] {
             ScissorsTower t(FiniteLocalRing::make("Z/121"));
             return report_digest(t.verify_key_identity());
         }},
        {"orbit census Z/9 (n=4)",
         [] {
             ConfigSpace cs(FiniteLocalRing::make("Z/9"));
             auto c = cs.orbit_census(4);
             return std::to_string(c.sl2_orbits) + "/" + std::to_string(c.gl2_orbits);
         }},
        {"specialization F_7(t), 2000 samples",
         [] {
             FunctionField ff(FiniteLocalRing::make("F_7"));
             Specializer sp(ff, ff.place_t());
             return report_digest(sp.verify_relations(2000, 1, 4));
         }},
    };

    std::cout << "kernel, serial_s, parallel_s(threads=" << threads << "), speedup, identical\n";
    for (auto& c : cases) {
        set_thread_count(1);
        auto [ts, ds] = timed(c.run);
        set_thread_count(threads);
        auto [tp, dp] = timed(c.run);
        std::cout << c.name << ", " << ts << ", " << tp << ", "
                  << (tp > 0 ? ts / tp : 0.0) << ", " << (ds == dp ? "yes" : "NO") << "\n";
        if (ds != dp) {
            std::cerr << "parallel output differs from serial output\n";
            return 1;
        }
    }
    set_thread_count(1);
    return 0;
}
