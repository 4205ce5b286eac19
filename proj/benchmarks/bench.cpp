#include "pisotdyn/discreteness.hpp"
#include "pisotdyn/orbits.hpp"

#include <benchmark/benchmark.h>

using namespace pisotdyn;

namespace {

NumberField golden() {
    return NumberField::make({Int(-1), Int(-1), Int(1)}, RatInterval(Rat(1), Rat(2)));
}

void BM_field_multiply(benchmark::State& state) {
    NumberField g = golden();
    FieldElement x(g, {Rat(355, 113), Rat(-22, 7)});
    FieldElement y(g, {Rat(17, 31), Rat(8, 13)});
    for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_field_multiply);

void BM_exact_orbit_step(benchmark::State& state) {
    NumberField g = golden();
    PLMap t2 = beta_map(g);
    FieldElement x(g, {Rat(1, 97), Rat(3, 89)});
    for (auto _ : state) {
        x = t2.apply(x).first;
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_exact_orbit_step);

void BM_window_enumeration(benchmark::State& state) {
    NumberField g = golden();
    FieldElement zero = FieldElement::rational(g, 0), one = FieldElement::rational(g, 1);
    DigitSet e = DigitSet::make(g, {zero, one}).difference();
    FieldElement lo = FieldElement::rational(g, -1), hi = FieldElement::rational(g, 2);
    for (auto _ : state) {
        WindowEnumeration w = enumerate_window(e, lo, hi, EnumMethod::LatticeBox);
        benchmark::DoNotOptimize(w.elements.size());
    }
}
BENCHMARK(BM_window_enumeration);

}  // namespace

BENCHMARK_MAIN();
