#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "shop2/functions.hpp"
#include "shop2/logic.hpp"
#include "shop2/state.hpp"

using namespace shop2;

namespace {

std::vector<Term> weights(int n) {
  std::vector<Term> atoms;
  for (int i = 0; i < n; ++i) {
    atoms.push_back(parseTerm("(w o" + std::to_string(i) + " " + std::to_string((i * 7919) % 1000) + ")"));
  }
  return atoms;
}

void BM_SortBy(benchmark::State& st) {
  State s(weights(static_cast<int>(st.range(0))));
  FunctionTable f;
  AxiomSet axioms;
  Prover prover(s, axioms, f);
  Term query = parseTerm("(:sort-by ?k #'< ((w ?o ?k)))");
  for (auto _ : st) benchmark::DoNotOptimize(prover.satisfiers(query, Substitution()));
}
BENCHMARK(BM_SortBy)->Arg(16)->Arg(256)->Arg(4096);

void BM_JoinWithNegation(benchmark::State& st) {
  int n = static_cast<int>(st.range(0));
  std::vector<Term> atoms = weights(n);
  for (int i = 0; i < n; i += 3) atoms.push_back(parseTerm("(done o" + std::to_string(i) + ")"));
  State s(atoms);
  FunctionTable f;
  AxiomSet axioms;
  Prover prover(s, axioms, f);
  Term query = parseTerm("((w ?o ?k) (not (done ?o)) (eval (> ?k 500)))");
  for (auto _ : st) benchmark::DoNotOptimize(prover.satisfiers(query, Substitution()));
}
BENCHMARK(BM_JoinWithNegation)->Arg(64)->Arg(1024);

void BM_Unify(benchmark::State& st) {
  Term a = parseTerm("(f ?x (g ?y ?z) (h 1 2 ?w))");
  Term b = parseTerm("(f a (g b c) (h 1 2 (k d)))");
  for (auto _ : st) {
    Substitution theta;
    benchmark::DoNotOptimize(unify(a, b, theta));
  }
}
BENCHMARK(BM_Unify);

void BM_ParseTerm(benchmark::State& st) {
  std::string text = "(and (at ?p ?c1) (aircraft ?a) (at ?a ?c3) (different ?c1 ?c3) (forall (?c) ((dest ?a ?c)) "
                     "((same ?c ?c1))))";
  for (auto _ : st) benchmark::DoNotOptimize(parseTerm(text));
}
BENCHMARK(BM_ParseTerm);

}  // namespace
