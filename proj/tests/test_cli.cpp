#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("nb_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, bool pin_time = true) {
  std::string cmd;
  if (pin_time) cmd += "NUGGETBENCH_TIMESTAMP=2000-01-01T00:00:00Z ";
  cmd += std::string(NUGGETBENCH_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("synth determinism and validate") {
  Workdir w;
  REQUIRE(run("synth --seed 1 --n 12 --out " + w.path("a.json")) == 0);
  REQUIRE(run("synth --seed 1 --n 12 --out " + w.path("b.json")) == 0);
  CHECK(slurp(w.path("a.json")) == slurp(w.path("b.json")));
  REQUIRE(run("synth --seed 2 --n 12 --out " + w.path("c.json")) == 0);
  CHECK(slurp(w.path("a.json")) != slurp(w.path("c.json")));

  CHECK(run("validate --in " + w.path("a.json") + " --out " + w.path("v.txt")) == 0);
  CHECK(slurp(w.path("v.txt")).empty());

  std::ofstream bad(w.path("bad.json"));
  bad << R"([{"id":"x","turns":[{"speaker":"customer","nugget":{"HNUG":1.0}}]}])";
  bad.close();
  CHECK(run("validate --in " + w.path("bad.json") + " --out " + w.path("vb.txt")) == 1);
  auto findings = slurp(w.path("vb.txt"));
  CHECK(findings.find("ERROR\tx\t") != std::string::npos);
}

TEST_CASE("exit codes") {
  Workdir w;
  CHECK(run("definitely-not-a-command") == 2);
  CHECK(run("eval-nd --no-such-flag 1") == 2);
  CHECK(run("eval-nd --gold " + w.path("nope.json") + " --pred " + w.path("nope.json") +
            " --out " + w.path("r.json")) == 1);
}

TEST_CASE("full pipeline reruns byte-identically under a pinned manifest") {
  Workdir w;
  REQUIRE(run("synth --seed 5 --n 24 --out " + w.path("c.json")) == 0);
  REQUIRE(run("split --in " + w.path("c.json") + " --fractions 0.5,0.25,0.25 --seed 2" +
              " --out-prefix " + w.path("s")) == 0);
  REQUIRE(fs::exists(w.path("s.train.json")));
  REQUIRE(fs::exists(w.path("s.valid.json")));
  REQUIRE(fs::exists(w.path("s.test.json")));

  std::string train_cmd = "train --arch hcnn-lstm --train " + w.path("s.train.json") +
                          " --valid " + w.path("s.valid.json") + " --epochs 2 --seed 9 --out " +
                          w.path("m.ckpt") + " --history " + w.path("h.csv");
  REQUIRE(run(train_cmd) == 0);
  auto ckpt1 = slurp(w.path("m.ckpt"));
  auto hist1 = slurp(w.path("h.csv"));
  REQUIRE(run(train_cmd) == 0);
  CHECK(slurp(w.path("m.ckpt")) == ckpt1);
  CHECK(slurp(w.path("h.csv")) == hist1);

  std::string predict_cmd = "predict --model " + w.path("m.ckpt") + " --in " +
                            w.path("s.test.json") + " --out " + w.path("p.json");
  REQUIRE(run(predict_cmd) == 0);
  auto pred1 = slurp(w.path("p.json"));
  REQUIRE(run(predict_cmd) == 0);
  CHECK(slurp(w.path("p.json")) == pred1);

  std::string eval_cmd = "eval-nd --gold " + w.path("s.test.json") + " --pred " +
                         w.path("p.json") + " --out " + w.path("r.json");
  REQUIRE(run(eval_cmd) == 0);
  auto report1 = slurp(w.path("r.json"));
  auto csv1 = slurp(w.path("r.csv"));
  REQUIRE(run(eval_cmd) == 0);
  CHECK(slurp(w.path("r.json")) == report1);
  CHECK(slurp(w.path("r.csv")) == csv1);
  CHECK(report1.find("\"timestamp\": \"2000-01-01T00:00:00Z\"") != std::string::npos);

  // Thread count must not change report bytes.
  std::string eval4 = "eval-nd --threads 4 --gold " + w.path("s.test.json") + " --pred " +
                      w.path("p.json") + " --out " + w.path("r4.json");
  REQUIRE(run(eval4) == 0);
  CHECK(slurp(w.path("r4.json")) == report1);

  // Baselines flow through the same predict/evaluate path.
  REQUIRE(run("predict --baseline popularity --fit " + w.path("s.train.json") + " --in " +
              w.path("s.test.json") + " --out " + w.path("bp.json")) == 0);
  REQUIRE(run("eval-nd --gold " + w.path("s.test.json") + " --pred " + w.path("bp.json") +
              " --out " + w.path("rb.json")) == 0);
  REQUIRE(run("eval-dq --gold " + w.path("s.test.json") + " --pred " + w.path("bp.json") +
              " --out " + w.path("rq.json")) == 0);

  std::string cls_cmd = "classical --gold " + w.path("s.test.json") + " --pred " +
                        w.path("bp.json") + " --out " + w.path("cls.json");
  REQUIRE(run(cls_cmd) == 0);
  auto cls1 = slurp(w.path("cls.json"));
  REQUIRE(run(cls_cmd) == 0);
  CHECK(slurp(w.path("cls.json")) == cls1);
  for (const char* name :
       {"cls.confusion.csv", "cls.prf.csv", "cls.tiegap.csv", "cls.expansion.csv",
        "cls.dq_accuracy.csv"}) {
    CHECK(fs::exists(w.path(name)));
  }
}

TEST_CASE("curve command") {
  Workdir w;
  REQUIRE(run("synth --seed 6 --n 16 --out " + w.path("c.json")) == 0);
  REQUIRE(run("curve --arch hcnn-lstm --train " + w.path("c.json") + " --test " +
              w.path("c.json") + " --fractions 0.5,1.0 --seed 1 --n-seeds 1 --epochs 2 --out " +
              w.path("curve.csv")) == 0);
  auto csv = slurp(w.path("curve.csv"));
  CHECK(csv.find("fraction,seed,n_train,primary,secondary") == 0);
  CHECK(csv.find("median") != std::string::npos);
}

TEST_CASE("no temp files left behind") {
  Workdir w;
  REQUIRE(run("synth --seed 1 --n 4 --out " + w.path("x.json")) == 0);
  for (const auto& entry : fs::directory_iterator(w.dir)) {
    CHECK(entry.path().string().find(".tmp") == std::string::npos);
  }
}
