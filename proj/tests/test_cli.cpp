#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const char* exe = std::getenv("NAHMLAB_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "NAHMLAB_CLI must point at the nahmlab binary");
  std::string cmd = std::string(exe) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("expand") {
  auto r = run("expand 'qpow(1/40)*J(2)^6' --depth 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("q^(1/40)*{1 - 6*q^(2)} + O(q^(3))") != std::string::npos);
  auto one = run("expand 'J(1)/J(1)'");
  CHECK(one.code == 0);
  CHECK(one.out.rfind("1", 0) == 0);
  auto bad = run("expand 'J(1'");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("syntax error") != std::string::npos);
  CHECK(bad.out.find("column") != std::string::npos);
  auto js = run("--format json expand 'J(1)' --depth 3");
  CHECK(js.code == 0);
  auto j = nlohmann::json::parse(js.out);
  CHECK(j.is_object());
}

TEST_CASE("verify") {
  auto r = run("--format json verify rogers");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  auto rep = j.is_array() ? j[0] : j;
  CHECK(rep["suite"] == "rogers");
  CHECK(rep["checks"].size() == 7);
  CHECK(rep.contains("config-hash"));
  auto list = run("verify --list");
  CHECK(list.code == 0);
  CHECK(list.out.find("tadpole-sums") != std::string::npos);
  auto missing = run("verify nonexistent");
  CHECK(missing.code != 0);
}

TEST_CASE("verify exits nonzero on a failing suite") {
  std::string dir = "/tmp/nahmlab-cli-test";
  std::filesystem::create_directories(dir);
  FILE* f = std::fopen((dir + "/bad.suite").c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("suite bad\ndepth 10\nx: J(1) == J(2)\n", f);
  std::fclose(f);
  auto r = run("verify bad");
  CHECK(r.code == 2);  // unknown suite
  setenv("NAHMLAB_SUITES", dir.c_str(), 1);
  auto r2 = run("verify bad");
  unsetenv("NAHMLAB_SUITES");
  CHECK(r2.code == 1);
  CHECK(r2.out.find("fail") != std::string::npos);
}

TEST_CASE("nahm, tba and obstruction") {
  auto n = run("--format json nahm --matrix tadpole:3 --B 0,0,1/2 --depth 3");
  CHECK(n.code == 0);
  auto d = run("--format json nahm --matrix tadpole-inv:3 --B 1/2,1,3/2 --dual --triple");
  CHECK(d.code == 0);
  auto dj = nlohmann::json::parse(d.out);
  CHECK(dj["A"] == "2,-1,0;-1,2,-1;0,-1,1");
  CHECK(dj["B"] == "0,0,1/2");
  auto t = run("--format json tba --matrix tadpole:3 --tol 1e-30");
  CHECK(t.code == 0);
  auto tj = nlohmann::json::parse(t.out);
  CHECK(tj["Q"].size() == 3);
  auto o = run("--format json obstruction --B 1,0,0");
  CHECK(o.code == 0);
  auto oj = nlohmann::json::parse(o.out);
  CHECK(oj["verdict"] == "obstructed");
  CHECK(oj["c"]["a"] == "-139/80");
  CHECK(oj["c"]["b"] == "17/20");
  auto c = run("--format json obstruction --B 0,0,1/2");
  CHECK(nlohmann::json::parse(c.out)["candidate"] == "1/40");
}

TEST_CASE("modular subcommands") {
  auto s = run("sturm --weight 2 --level 200");
  CHECK(s.code == 0);
  CHECK(s.out.find("2401") != std::string::npos);
  auto w = run("--format json remark44 --depth 8");
  CHECK(w.code == 0);
  auto c = run("--format json conjecture --n 3 --depth 15");
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["pass"] == true);
  auto tr = run("transform --suite weber --tau 0,2 --depth 80");
  CHECK(tr.code == 0);
  auto wr = run("wronskian --basis tildeF --depth 3");
  CHECK(wr.code == 0);
}

TEST_CASE("usage errors") {
  CHECK(run("frobnicate").code != 0);
  CHECK(run("--version").out.find("0.1.0") != std::string::npos);
}
