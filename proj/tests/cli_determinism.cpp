// Reruns CLI subcommands with identical (config, seed) and verifies the data
// outputs are bit-identical; also exercises the exit-code contract and the
// coefficient-table cache.

#include "wwnf/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

bool same_bytes(const std::string& a, const std::string& b) {
    return wwnf::read_text_file(a) == wwnf::read_text_file(b);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_determinism <path-to-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];
    fs::path work = fs::temp_directory_path() / "wwnf_determinism";
    fs::remove_all(work);
    fs::create_directories(work);
    setenv("WWNF_CACHE", (work / "cache").string().c_str(), 1);

    int fails = 0;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) {
            std::fprintf(stderr, "FAIL: %s\n", what);
            ++fails;
        }
    };

    const std::string null_redirect = " > /dev/null 2>&1";

    // measure: identical (config, seed) => identical CSV
    std::string m1 = (work / "m1").string(), m2 = (work / "m2").string();
    expect(run(cli + " --out " + m1 +
               " measure --sites 2,3 --spec g0 --eps 0.1,0.05 --samples 20000"
               " --seed 99 --threads 1" + null_redirect) == 0,
           "measure run 1");
    expect(run(cli + " --out " + m2 +
               " measure --sites 2,3 --spec g0 --eps 0.1,0.05 --samples 20000"
               " --seed 99 --threads 4" + null_redirect) == 0,
           "measure run 2");
    expect(same_bytes(m1 + "/measure.csv", m2 + "/measure.csv"),
           "measure.csv bit-identical across reruns and shard counts");

    // twist on the worked example
    std::string t1 = (work / "t1").string();
    expect(run(cli + " --out " + t1 + " twist --sites 3,2" + null_redirect) == 0,
           "twist run");
    auto twist = wwnf::json::parse(wwnf::read_text_file(t1 + "/twist.json"));
    expect(twist.at("int_cert") == "-1440", "twist int_cert = -1440");

    // simulate twice: trajectory identical; second run hits the cache
    std::string s1 = (work / "s1").string(), s2 = (work / "s2").string();
    expect(run(cli + " --out " + s1 +
               " simulate --sites 2,3 --mode full --cutoff 6 --eps 0.05 --T 5"
               " --tol 1e-9" + null_redirect) == 0,
           "simulate run 1");
    expect(run(cli + " --out " + s2 +
               " simulate --sites 2,3 --mode full --cutoff 6 --eps 0.05 --T 5"
               " --tol 1e-9" + null_redirect) == 0,
           "simulate run 2 (cached table)");
    expect(same_bytes(s1 + "/trajectory.csv", s2 + "/trajectory.csv"),
           "trajectory.csv bit-identical");
    expect(fs::exists(work / "cache"), "cache directory populated");

    // a corrupted cache entry must be rejected and rebuilt
    for (auto& e : fs::directory_iterator(work / "cache")) {
        auto txt = wwnf::read_text_file(e.path().string());
        txt.replace(txt.find("\"content_hash\":") + 16, 1, "9");
        wwnf::write_text_file(e.path().string(), txt);
    }
    std::string s3 = (work / "s3").string();
    expect(run(cli + " --out " + s3 +
               " simulate --sites 2,3 --mode full --cutoff 6 --eps 0.05 --T 5"
               " --tol 1e-9" + null_redirect) == 0,
           "simulate run 3 (corrupted cache)");
    expect(same_bytes(s1 + "/trajectory.csv", s3 + "/trajectory.csv"),
           "corrupted cache rebuilt, not trusted");

    // smoke: every subcommand runs and writes its primary output
    struct Smoke {
        const char* args;
        const char* artifact;
    };
    for (const Smoke& sm : {
             Smoke{"resonances --sites 4,9 --order 4", "resonances.csv"},
             Smoke{"bnf --mode full --cutoff 8", "bnf_report.json"},
             Smoke{"bnf --mode constant --cutoff 6", "bnf_report.json"},
             Smoke{"bnf --mode corrections --cutoff 9 --sites 3 --zeta 1.0",
                   "bnf_report.json"},
             Smoke{"spectrum --sites 2,3 --zeta 1,1 --eps 0.05", "spectrum.json"},
             Smoke{"divisors --sites 2,3 --p 1 --jmax 500", "divisors.json"},
             Smoke{"floquet --sites 2,3 --eps 0.04 --lmax 2 --jmax 8", "floquet.csv"},
         }) {
        static int n = 0;
        std::string dir = (work / ("smoke" + std::to_string(n++))).string();
        expect(run(cli + " --out " + dir + " " + sm.args + null_redirect) == 0,
               sm.args);
        expect(fs::exists(dir + "/" + sm.artifact) &&
                   fs::exists(dir + "/" + std::string(sm.artifact) + ".manifest.json"),
               "artifact and manifest written");
    }

    // binary trajectory frames carry a documented header
    std::string b1 = (work / "b1").string();
    expect(run(cli + " --out " + b1 +
               " simulate --sites 2,3 --mode bnf --cutoff 6 --eps 0.05 --T 2"
               " --tol 1e-9 --format bin" + null_redirect) == 0,
           "simulate binary run");
    expect(fs::exists(b1 + "/trajectory.bin") &&
               fs::exists(b1 + "/trajectory.header.json"),
           "binary frames + header written");
    auto header = wwnf::json::parse(wwnf::read_text_file(b1 + "/trajectory.header.json"));
    auto frames = header.at("frames").get<std::size_t>();
    auto per = header.at("doubles_per_frame").get<std::size_t>();
    expect(fs::file_size(b1 + "/trajectory.bin") == frames * per * sizeof(double),
           "binary payload matches the header");

    // config file values are applied and flags win over them
    wwnf::write_text_file((work / "run.toml").string(), "[twist]\nsites=\"3,2\"\n");
    std::string c1 = (work / "c1").string();
    expect(run(cli + " --config " + (work / "run.toml").string() + " --out " + c1 +
               " twist" + null_redirect) == 0,
           "config file run");
    auto t_cfg = wwnf::json::parse(wwnf::read_text_file(c1 + "/twist.json"));
    expect(t_cfg.at("int_cert") == "-1440", "config file sites applied");
    std::string c2 = (work / "c2").string();
    expect(run(cli + " --config " + (work / "run.toml").string() + " --out " + c2 +
               " twist --sites 5" + null_redirect) == 0,
           "config file + flag run");
    auto t_flag = wwnf::json::parse(wwnf::read_text_file(c2 + "/twist.json"));
    expect(t_flag.at("int_cert") == "250", "flags win over config file values");

    // exit codes: 2 config error, 3 genericity failure
    int rc0 = run(cli + " --out " + (work / "e1").string() +
                  " bnf --mode nosuch --cutoff 4" + null_redirect);
    expect(WEXITSTATUS(rc0) == 2, "config error exits with 2");
    int rc = run(cli + " --out " + (work / "e2").string() +
                 " bnf --mode weak --cutoff 12 --sites 4,9,-1" + null_redirect);
    expect(WEXITSTATUS(rc) == 3, "genericity failure exits with 3");
    int rc2 = run(cli + " --out " + (work / "e3").string() + " sites --sites 2,3" +
                  null_redirect);
    expect(WEXITSTATUS(rc2) == 0, "generic sites exit 0");

    if (fails == 0) std::printf("cli determinism: all checks passed\n");
    return fails == 0 ? 0 : 1;
}
