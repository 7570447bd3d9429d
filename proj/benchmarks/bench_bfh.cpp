#include <benchmark/benchmark.h>

#include "bfh/ainfty.hpp"
#include "bfh/manifolds.hpp"
#include "bfh/slides.hpp"

using namespace bfh;

namespace {

void BM_Algebra(benchmark::State& st) {
    const Pmc z = split_pmc(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        Algebra A(z);
        benchmark::DoNotOptimize(A.size());
    }
}
BENCHMARK(BM_Algebra)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SlideBimodule(benchmark::State& st) {
    const Pmc z = split_pmc(2);
    // over-slide (b1 = 2, c1 = 1 on the 1-based circle) and an under-slide
    auto s = apply_arcslide(z, st.range(0) ? 1 : 2, st.range(0) ? 0 : 3);
    auto L = std::make_shared<const Algebra>(z, 0);
    auto R = std::make_shared<const Algebra>(reverse(s.target), 0);
    for (auto _ : st) benchmark::DoNotOptimize(arcslide_dd(s, L, R).dd.size());
    st.SetLabel(s.str());
}
BENCHMARK(BM_SlideBimodule)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Preset(benchmark::State& st, const char* name) {
    auto in = *preset(name);
    PipelineOptions opt;
    opt.jobs = 1;
    for (auto _ : st) benchmark::DoNotOptimize(hf_hat_closed(in, opt).total_rank);
}
BENCHMARK_CAPTURE(BM_Preset, s1xs2_g2, "s1xs2-g2")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Preset, poincare, "poincare")->Unit(benchmark::kMillisecond);

void BM_MinimalModelLoop(benchmark::State& st) {
    auto caa = caa_identity(split_pmc(1), 0);
    const auto& A = *caa.module->algebra(AInftyModule::Side::rho);
    const auto& Ap = *caa.module->algebra(AInftyModule::Side::lambda);
    const int n = static_cast<int>(st.range(0));
    std::vector<int> r{chord_generator(A, "3")}, l;
    for (int i = 0; i < n; ++i) r.push_back(chord_generator(A, "23")), l.push_back(chord_generator(Ap, "12"));
    l.push_back(chord_generator(Ap, "1"));
    for (auto _ : st) {
        // fresh model each time so the memo does not hide the path sum
        MinimalModel m(caa.module, homology_retract(*caa.module));
        int x = 0;
        while (m.idem(x, AInftyModule::Side::rho) != 1u << A.pmc().pair_of(0)) ++x;
        benchmark::DoNotOptimize(m.m(x, l, r));
    }
}
BENCHMARK(BM_MinimalModelLoop)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BoxTensor(benchmark::State& st) {
    ClosedInput in;
    in.word.genus = 1;
    WordStep t;
    t.kind = WordStep::Kind::twist;
    t.point = 1;
    t.power = static_cast<int>(st.range(0));
    in.word.steps = {t};
    for (auto _ : st) benchmark::DoNotOptimize(hf_hat_box(in).rank);
}
BENCHMARK(BM_BoxTensor)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
