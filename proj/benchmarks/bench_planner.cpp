#include <benchmark/benchmark.h>

#include "shop2/bundled.hpp"
#include "shop2/engine.hpp"
#include "shop2/temporal.hpp"

using namespace shop2;

namespace {

Domain domain(const char* name) { return loadDomainText(*bundledFile(std::string(name) + ".shop")); }

Problem problem(const char* name) { return loadProblems(*bundledFile("problems/" + std::string(name) + ".shop")).at(0); }

void BM_LogisticsFirstPlan(benchmark::State& st) {
  Domain d = domain("logistics");
  Problem p = problem("logistics-two");
  for (auto _ : st) benchmark::DoNotOptimize(plan(d, p));
}
BENCHMARK(BM_LogisticsFirstPlan);

void BM_LogisticsAllPlans(benchmark::State& st) {
  Domain d = domain("logistics");
  Problem p = problem("logistics-two");
  SearchConfig c;
  c.mode = SearchMode::AllPlans;
  for (auto _ : st) benchmark::DoNotOptimize(plan(d, p, c));
}
BENCHMARK(BM_LogisticsAllPlans);

void BM_ZenoSimpleOptimize(benchmark::State& st) {
  Domain d = domain("zenotravel-simple");
  Problem p = problem("zenotravel-simple-small");
  SearchConfig c;
  c.mode = SearchMode::BranchAndBound;
  for (auto _ : st) benchmark::DoNotOptimize(plan(d, p, c));
}
BENCHMARK(BM_ZenoSimpleOptimize);

void BM_ZenoNumericFirstPlan(benchmark::State& st) {
  Domain d = domain("zenotravel-numeric");
  Problem p = problem("zenotravel-numeric-small");
  for (auto _ : st) benchmark::DoNotOptimize(plan(d, p));
}
BENCHMARK(BM_ZenoNumericFirstPlan);

void BM_TemporalPlanAndCheck(benchmark::State& st) {
  Domain d = domain("zenotravel-temporal");
  Problem p = problem("zenotravel-temporal-small");
  for (auto _ : st) {
    auto r = plan(d, p);
    benchmark::DoNotOptimize(checkTemporalPlan(d, p, *r.best()));
  }
}
BENCHMARK(BM_TemporalPlanAndCheck);

void BM_Validate(benchmark::State& st) {
  Domain d = domain("zenotravel-numeric");
  Problem p = problem("zenotravel-numeric-small");
  Plan best = *plan(d, p).best();
  for (auto _ : st) benchmark::DoNotOptimize(validatePlan(d, p, best));
}
BENCHMARK(BM_Validate);

}  // namespace
