#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fleetmix/model.hpp"
#include "helpers.hpp"
#include "json.hpp"
#include "oracles.hpp"

#ifndef FLEETMIX_CLI
#error "FLEETMIX_CLI must point at the fleetmix executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FLEETMIX_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  auto dir = fs::temp_directory_path() / ("fleetmix_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors") {
    CHECK(run("").code == 2);
    CHECK(run("solve --method nope --instance x.json").code == 2);
    CHECK(run("frobnicate").code == 2);
  }

  TEST_CASE("instance errors") {
    auto dir = scratch();
    CHECK(run("solve --method uf --instance " + q(dir / "missing.json")).code == 4);
    std::ofstream(dir / "bad.json") << "{\"name\": 3}";
    CHECK(run("solve --method uf --instance " + q(dir / "bad.json")).code == 4);
    CHECK(run("lb --instance " + q(dir / "bad.json")).code == 4);
  }

  TEST_CASE("generate") {
    auto dir = scratch();
    fleetmix::RandomInstanceConfig rc;
    rc.num_days = 2;
    rc.min_requests = 10;
    rc.max_requests = 12;
    fleetmix::save_instance_file(fleetmix::make_random_instance(rc, 3), (dir / "base.json").string());
    auto one = run("generate --base " + q(dir / "base.json") + " --days 1 --seed 2 --out " + q(dir / "g1.json"));
    REQUIRE(one.code == 0);
    auto base = fleetmix::load_instance_file((dir / "base.json").string());
    auto g1 = fleetmix::load_instance_file((dir / "g1.json").string());
    CHECK(g1.days[0].requests == base.days[0].requests);

    const std::string flags = " --days 50 --seed 4 --drop 0.2 --dup 0.1 --scale 0.8,1.2 --base " + q(dir / "base.json");
    auto a = run("generate" + flags + " --out " + q(dir / "a.json"));
    auto b = run("generate" + flags + " --out " + q(dir / "b.json"));
    REQUIRE(a.code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    CHECK(a.out == b.out);
    std::istringstream rows(a.out);
    std::string line;
    int n = 0;
    while (std::getline(rows, line)) ++n;
    CHECK(n == 51);  // header plus one row per day
    CHECK(run("generate --base " + q(dir / "base.json") + " --days 3 --drop 2 --out " + q(dir / "c.json")).code == 2);
    CHECK(run("generate --base " + q(dir / "base.json") + " --days 3 --scale 0,1 --out " + q(dir / "c.json")).code == 2);
    // Every request dropped: the generator gives up.
    CHECK(run("generate --base " + q(dir / "base.json") + " --days 3 --drop 1 --out " + q(dir / "c.json")).code == 3);
  }

  TEST_CASE("solve: exact single day, repeats, determinism") {
    auto dir = scratch();
    auto one = testing::tiny_instance(5, 1, 5, 5, 2);
    fleetmix::save_instance_file(one, (dir / "one.json").string());
    auto r = run("solve --method rmh --pricing exact --parallel 1 --instance " + q(dir / "one.json"));
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    std::vector<double> b;
    for (const auto& t : one.vehicle_types) b.push_back(t.fixed_cost);
    auto ref = oracle::fsm(oracle::usage_costs(one.days[0], one.vehicle_types), b);
    REQUIRE(ref);
    CHECK(doc["plans"][0]["total_cost"].get<double>() == doctest::Approx(ref->second).epsilon(1e-9));

    auto multi = testing::tiny_instance(6, 3, 6, 9, 3);
    fleetmix::save_instance_file(multi, (dir / "multi.json").string());
    const std::string flags = "solve --method rmh --parallel 2 --repeat 5 --seed 3 --lns-iterations 150 "
                              "--cg-iterations 10 --instance " + q(dir / "multi.json");
    auto x = run(flags + " --csv " + q(dir / "x.csv"));
    auto y = run(flags + " --csv " + q(dir / "y.csv"));
    REQUIRE(x.code == 0);
    CHECK(x.out == y.out);
    CHECK(slurp(dir / "x.csv") == slurp(dir / "y.csv"));
    auto j = json::parse(x.out);
    REQUIRE(j["plans"].size() == 5);
    std::vector<double> costs;
    for (const auto& p : j["plans"]) costs.push_back(p["total_cost"].get<double>());
    double mean = 0;
    for (double c : costs) mean += c / 5;
    double var = 0;
    for (double c : costs) var += (c - mean) * (c - mean) / 4;
    CHECK(j["aggregate"]["mean_cost"].get<double>() == doctest::Approx(mean));
    CHECK(j["aggregate"]["stddev_cost"].get<double>() == doctest::Approx(std::sqrt(var)));
  }

  TEST_CASE("SA uses the original fixed costs") {
    auto dir = scratch();
    fleetmix::RandomInstanceConfig rc;
    rc.num_days = 25;
    rc.min_requests = 4;
    rc.max_requests = 8;
    auto inst = fleetmix::make_random_instance(rc, 8);
    fleetmix::save_instance_file(inst, (dir / "sa.json").string());
    auto r = run("solve --method sa --m 3 --parallel 1 --lns-iterations 150 --cg-iterations 10 --instance " +
                 q(dir / "sa.json"));
    REQUIRE(r.code == 0);
    auto p = json::parse(r.out)["plans"][0];
    if (!p["infeasible"].get<bool>()) {
      double fixed = 0;
      auto fleet = p["fleet"].get<std::vector<int>>();
      for (std::size_t t = 0; t < fleet.size(); ++t) fixed += inst.vehicle_types[t].fixed_cost * fleet[t];
      CHECK(p["fixed_cost"].get<double>() == doctest::Approx(fixed));
    }
  }

  TEST_CASE("lower bound and gap") {
    auto dir = scratch();
    auto inst = testing::tiny_instance(9, 3, 3, 5, 2);
    fleetmix::save_instance_file(inst, (dir / "lbi.json").string());
    auto lb = run("lb --runs 2 --parallel 1 --instance " + q(dir / "lbi.json") + " --out " + q(dir / "lb.json"));
    REQUIRE(lb.code == 0);
    auto j = json::parse(slurp(dir / "lb.json"));
    auto opt = oracle::lhfsm(inst);
    REQUIRE(opt);
    CHECK(j["total_lb"].get<double>() <= opt->value + 1e-6);
    auto s = run("solve --method bap --pricing exact --parallel 1 --instance " + q(dir / "lbi.json") +
                 " --gap-against " + q(dir / "lb.json"));
    REQUIRE(s.code == 0);
    auto plan = json::parse(s.out)["plans"][0];
    CHECK(plan["total_cost"].get<double>() == doctest::Approx(opt->value).epsilon(1e-9));
    CHECK(plan["gap"].get<double>() >= -1e-9);
  }

  TEST_CASE("sweeps") {
    auto dir = scratch();
    auto inst = testing::tiny_instance(10, 3, 4, 6, 3);
    fleetmix::save_instance_file(inst, (dir / "sw.json").string());
    auto d = run("sweep --sweep days --methods uf,rmh --parallel 1 --lns-iterations 100 --cg-iterations 5 --instance " +
                 q(dir / "sw.json"));
    REQUIRE(d.code == 0);
    std::istringstream rows(d.out);
    std::string line;
    int uf = 0, rmh = 0;
    while (std::getline(rows, line)) {
      uf += line.find(",UF,") != std::string::npos;
      rmh += line.find(",RMH,") != std::string::npos;
    }
    CHECK(uf == 3);
    CHECK(rmh == 3);

    // A request only type 2 can carry: removing type 2 makes the instance invalid.
    auto critical = inst;
    critical.days[0].requests[0].allowed_types = {2};
    fleetmix::save_instance_file(critical, (dir / "crit.json").string());
    auto t = run("sweep --sweep types --max-removed 2 --methods uf --parallel 1 --lns-iterations 100 --instance " +
                 q(dir / "crit.json"));
    REQUIRE(t.code == 0);
    CHECK(t.out.find("invalid") != std::string::npos);
    CHECK(t.out.find("3,UF,") != std::string::npos);
  }
}
