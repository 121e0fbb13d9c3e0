#include "generators.hpp"

#include <sstream>
#include <vector>

namespace shop2::testing {

namespace {

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string name(const char* prefix, int i) { return std::string(prefix) + std::to_string(i); }

void distances(std::ostringstream& out, std::mt19937& rng, int cities) {
  for (int a = 0; a < cities; ++a) {
    for (int b = a + 1; b < cities; ++b) {
      int d = pick(rng, 1, 6) * 10;
      out << " (distance " << name("c", a) << ' ' << name("c", b) << ' ' << d << ")";
      out << " (distance " << name("c", b) << ' ' << name("c", a) << ' ' << d << ")\n";
    }
  }
}

// Goal list over the tasks, either fully ordered or one unordered group.
std::string goalList(std::mt19937& rng, const std::vector<std::string>& tasks) {
  std::ostringstream g;
  bool unordered = tasks.size() > 1 && pick(rng, 0, 1) == 1;
  g << "(";
  if (unordered) g << "(:unordered";
  for (const auto& t : tasks) g << ' ' << t;
  if (unordered) g << ")";
  g << ")";
  return g.str();
}

}  // namespace

std::string randomLogisticsProblem(std::mt19937& rng, int index) {
  int trucks = pick(rng, 1, 2);
  int packages = pick(rng, 1, 4 - trucks);
  int locations = pick(rng, 2, 3);
  std::ostringstream out;
  out << "(defproblem logistics-" << index << " logistics\n  (";
  for (int t = 0; t < trucks; ++t) out << " (available-truck " << name("t", t) << ") (at " << name("t", t) << " home)";
  std::vector<std::string> tasks;
  for (int p = 0; p < packages; ++p) {
    int from = pick(rng, 0, locations - 1);
    int to = pick(rng, 0, locations - 1);
    out << "\n   (package " << name("p", p) << ") (at " << name("p", p) << ' ' << name("l", from) << ") (destination "
        << name("p", p) << ' ' << name("l", to) << ")";
    tasks.push_back("(transport " + name("p", p) + ")");
  }
  out << ")\n  " << goalList(rng, tasks) << ")\n";
  return out.str();
}

std::string randomZenoSimpleProblem(std::mt19937& rng, int index) {
  int planes = pick(rng, 1, 2);
  int persons = pick(rng, 1, 4 - planes);
  if (planes == 2 && persons == 2 && pick(rng, 0, 1) == 0) persons = 1;
  int cities = pick(rng, 2, 3);
  std::ostringstream out;
  out << "(defproblem zeno-" << index << " zenotravel-simple\n  ((fuel-burn slow 1) (fuel-burn fast 3)\n";
  for (int a = 0; a < planes; ++a) {
    int cap = pick(rng, 4, 10) * 10;
    int fuel = pick(rng, 0, cap / 10) * 10;
    out << "   (plane " << name("a", a) << ") (at " << name("a", a) << ' ' << name("c", pick(rng, 0, cities - 1))
        << ") (fuel " << name("a", a) << ' ' << fuel << ") (capacity " << name("a", a) << ' ' << cap << ")\n";
  }
  std::vector<std::string> tasks;
  for (int p = 0; p < persons; ++p) {
    out << "   (at " << name("q", p) << ' ' << name("c", pick(rng, 0, cities - 1)) << ")\n";
    tasks.push_back("(transport-person " + name("q", p) + ' ' + name("c", pick(rng, 0, cities - 1)) + ")");
  }
  distances(out, rng, cities);
  out << "  )\n  " << goalList(rng, tasks) << ")\n";
  return out.str();
}

std::string randomZenoTemporalProblem(std::mt19937& rng, int index) {
  int persons = pick(rng, 1, 2);
  int cities = pick(rng, 2, 3);
  int cap = pick(rng, 4, 10) * 10;
  int fuel = pick(rng, 0, cap / 10) * 10;
  std::ostringstream out;
  out << "(defproblem zeno-temporal-" << index << " zenotravel-temporal\n  ((plane a0) (at a0 "
      << name("c", pick(rng, 0, cities - 1)) << ") (fuel a0 " << fuel << ") (capacity a0 " << cap
      << ") (refuel-rate a0 " << pick(rng, 1, 4) * 10 << ") (fuel-burn a0 1)\n";
  for (int c = 0; c < cities; ++c) out << "   (city " << name("c", c) << ")";
  out << "\n";
  std::vector<std::string> tasks;
  for (int p = 0; p < persons; ++p) {
    out << "   (person " << name("q", p) << ") (at " << name("q", p) << ' ' << name("c", pick(rng, 0, cities - 1))
        << ")\n";
    tasks.push_back("(transport-person " + name("q", p) + ' ' + name("c", pick(rng, 0, cities - 1)) + ")");
  }
  distances(out, rng, cities);
  out << "  )\n  " << goalList(rng, tasks) << ")\n";
  return out.str();
}

}  // namespace shop2::testing
