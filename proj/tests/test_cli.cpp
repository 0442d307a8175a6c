// Subprocess tests for the command line tool: exit codes, determinism and
// output formats. argv[1] = path to the cocycle binary, argv[2] = data dir.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;
std::string g_tmpdir;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok %s\n", what.c_str());
    } else {
        std::printf("FAIL %s\n", what.c_str());
        ++g_failures;
    }
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const std::string out_path = g_tmpdir + "/cmd_output.txt";
    const std::string cmd = env + g_binary + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, buf.str()};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kDiagConfig = R"([subshift]
alphabet = 2

[generator]
matrices = [[[2.0, 0.0], [0.0, 0.5]], [[2.0, 0.0], [0.0, 0.5]]]

[measure]
type = bernoulli
p = [0.5, 0.5]

[experiment]
horizon = 128
samples = 4
seed = 1
)";

const char* kNilpotentConfig = R"([subshift]
alphabet = 2

[generator]
matrices = [[[0.0, 1.0], [0.0, 0.0]], [[0.0, 1.0], [0.0, 0.0]]]

[measure]
type = bernoulli
p = [0.5, 0.5]

[experiment]
horizon = 64
samples = 2
seed = 1
)";

const char* kHyperbolicSmall = R"([subshift]
alphabet = 2

[generator]
matrices = [[[3.0, 0.25], [0.1, 0.35]], [[2.2, -0.2], [0.15, 0.45]]]

[measure]
type = bernoulli
p = [0.5, 0.5]

[experiment]
period_min = 4
period_max = 6
horizon = 256
samples = 8
seed = 11
)";

const char* kThreeBlock = R"([subshift]
alphabet = 2

[generator]
matrices = [[[3.0, 0.2, 0.1], [0.05, 1.0, 0.1], [0.02, 0.05, 0.3]], [[2.8, -0.1, 0.05], [0.1, 1.1, -0.05], [0.01, 0.1, 0.35]]]

[measure]
type = bernoulli
p = [0.5, 0.5]

[experiment]
horizon = 8
samples = 2
seed = 2
)";

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <cocycle-binary> [datadir]\n");
        return 2;
    }
    g_binary = argv[1];
    g_tmpdir = "cli_test_tmp";
    if (std::system(("rm -rf " + g_tmpdir + " && mkdir -p " + g_tmpdir).c_str()) != 0)
        return 2;

    const std::string diag = g_tmpdir + "/diag.cfg";
    write_file(diag, kDiagConfig);
    const std::string nilpotent = g_tmpdir + "/nilpotent.cfg";
    write_file(nilpotent, kNilpotentConfig);
    const std::string hyper = g_tmpdir + "/hyper.cfg";
    write_file(hyper, kHyperbolicSmall);
    const std::string three = g_tmpdir + "/three.cfg";
    write_file(three, kThreeBlock);

    // spectrum: success and values
    {
        const auto r = run("spectrum " + diag);
        check(r.exit_code == 0, "spectrum exits 0");
        check(r.output.find("0.69314718055994529") != std::string::npos,
              "spectrum prints ln 2");
    }

    // config validation exit code 2
    {
        const std::string bad = g_tmpdir + "/bad.cfg";
        write_file(bad, std::string(kDiagConfig) +
                            "\n[generator]\nmatrices = [[[1, 0, 0], [0, 1, 0]], "
                            "[[1, 0, 0], [0, 1, 0]]]\n");
        const auto r = run("spectrum " + bad);
        check(r.exit_code == 2, "non-square generator matrix exits 2");
        check(r.output.find("generator.matrices") != std::string::npos ||
                  r.output.find("square") != std::string::npos,
              "error message names the offending key");
    }
    {
        const std::string missing = g_tmpdir + "/missing.cfg";
        write_file(missing, "[subshift]\nalphabet = 2\n[generator]\nmatrices = "
                            "[[[1, 0], [0, 1]], [[1, 0], [0, 1]]]\n");
        const auto r = run("spectrum " + missing);
        check(r.exit_code == 2, "missing measure section exits 2");
    }
    {
        const auto r = run("spectrum " + g_tmpdir + "/does_not_exist.cfg");
        check(r.exit_code == 2, "missing config file exits 2");
    }

    // split: nilpotent spectrum serializes the collapsed block as "-inf"
    {
        const auto r = run("split " + nilpotent + " --point \"0;;0\" --json " + g_tmpdir +
                           "/nil.json");
        check(r.exit_code == 0, "split on the nilpotent generator exits 0");
        const std::string json = read_file(g_tmpdir + "/nil.json");
        check(json.find("\"-inf\"") != std::string::npos,
              "collapsed exponents serialize as \"-inf\"");
    }

    // split: a horizon too short for the spectral gap is a numerical
    // failure surfaced as exit 3 with a diagnostic
    {
        const auto r = run("split " + three +
                           " --point seed:4 --set experiment.horizon=1");
        check(r.exit_code == 3, "unusable spectral gap exits 3");
        check(r.output.find("raise the horizon") != std::string::npos,
              "diagnostic suggests raising the horizon");
    }

    // periodic tables
    {
        const auto r = run("periodic " + diag + " -n 3 --json " + g_tmpdir + "/orbits.json");
        check(r.exit_code == 0, "periodic exits 0");
        check(r.output.find("8 periodic points") != std::string::npos,
              "full 2-shift has 8 points of period 3");
        const std::string json = read_file(g_tmpdir + "/orbits.json");
        check(json.find("\"kind\":\"periodic_table\"") != std::string::npos &&
                  json.find("\"spaces\"") != std::string::npos,
              "orbit JSON carries blocks and subspace bases");
    }
    {
        const std::string golden = g_tmpdir + "/golden.cfg";
        write_file(golden, std::string("[subshift]\ntransitions = [[1, 1], [1, 0]]\n") +
                               "[generator]\nmatrices = [[[2, 0], [0, 0.5]], "
                               "[[2, 0], [0, 0.5]]]\n[measure]\ntype = markov\n"
                               "stochastic = [[0.6666666666666666, "
                               "0.3333333333333333], [1.0, 0.0]]\n");
        const auto r = run("periodic " + golden + " -n 3 --words-only");
        check(r.exit_code == 0, "golden mean periodic exits 0");
        check(r.output.find("4 periodic points") != std::string::npos,
              "golden mean has 4 points of period 3");
    }
    {
        const auto r = run("periodic " + diag + " -n 10 --set experiment.enumeration_cap=4");
        check(r.exit_code == 2, "period above the enumeration cap exits 2");
    }

    // approx: determinism of report files
    {
        const auto r1 = run("approx " + hyper + " --json " + g_tmpdir + "/a1.json --csv " +
                            g_tmpdir + "/a1.csv");
        const auto r2 = run("approx " + hyper + " --json " + g_tmpdir + "/a2.json --csv " +
                            g_tmpdir + "/a2.csv");
        check(r1.exit_code == 0 && r2.exit_code == 0, "approx exits 0");
        check(read_file(g_tmpdir + "/a1.json") == read_file(g_tmpdir + "/a2.json"),
              "approx JSON is byte-identical across runs");
        check(read_file(g_tmpdir + "/a1.csv") == read_file(g_tmpdir + "/a2.csv"),
              "approx CSV is byte-identical across runs");
        check(read_file(g_tmpdir + "/a1.csv").find("period,word,score") == 0,
              "CSV header row");
    }

    // verify
    {
        const auto r = run("verify");
        check(r.exit_code == 0, "verify exits 0");
        const auto l = run("verify --list");
        check(l.exit_code == 0 && l.output.find("periodic_counting") != std::string::npos,
              "verify --list prints suite names");
        const auto broken = run("verify", "COCYCLE_VERIFY_TOL=1e-30 ");
        check(broken.exit_code == 3, "broken tolerance override exits 3");
        check(broken.output.find("FAIL") != std::string::npos,
              "broken tolerance names the violated invariant");
    }

    std::printf("%s\n", g_failures == 0 ? "ALL CLI TESTS PASSED" : "CLI TESTS FAILED");
    return g_failures == 0 ? 0 : 1;
}
