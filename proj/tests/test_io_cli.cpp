#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dgql/cli.hpp"
#include "helpers.hpp"

using namespace dgql;

namespace {

ParsedInput parse_str(const std::string& text, long trunc = 8) {
    std::istringstream in(text);
    return parse_input(in, trunc);
}

std::string data_dir() {
    if (const char* env = std::getenv("DGQL_DATA")) return env;
    return "data";
}

std::pair<int, std::string> run(JobSpec job) {
    std::ostringstream out, err;
    int rc = run_job(job, out, err);
    return {rc, out.str()};
}

} // namespace

TEST_CASE("scalar literals") {
    Field F = Field::rationals();
    CHECK(parse_scalar(F, "-3").to_string() == "-3");
    CHECK(parse_scalar(F, "4/6").to_string() == "2/3");
    CHECK(parse_scalar(F, "-4/6").to_string() == "-2/3");
    CHECK_THROWS_AS(parse_scalar(F, "1/0"), ParseError);
    CHECK_THROWS_AS(parse_scalar(F, "x"), ParseError);
    Field F3 = Field::prime(3);
    CHECK(parse_scalar(F3, "5").to_string() == "2");
    CHECK(parse_scalar(F3, "-1").to_string() == "2");
}

TEST_CASE("potential files") {
    auto in = parse_str("field prime 3\n"
                        "vertex v\n"
                        "arrow x v v 0\n"
                        "term 1 x x x\n");
    REQUIRE(in.potential);
    CHECK(in.field == Field::prime(3));
    CHECK(in.potential->terms.size() == 1);
    CHECK(in.potential->terms[0].second.arrows == std::vector<int>{0, 0, 0});

    // non-cycle terms are semantic errors
    CHECK_THROWS_AS(parse_str("field rational\nvertex a\nvertex b\n"
                              "arrow f a b 0\nterm 1 f\n"),
                    PreconditionError);
    // unknown declarations are syntax errors
    CHECK_THROWS_AS(parse_str("fiel rational\n"), ParseError);
    // undeclared arrows are semantic errors
    CHECK_THROWS_AS(parse_str("vertex v\narrow x v v 0\nterm 1 y\n"), PreconditionError);
}

TEST_CASE("dg files") {
    auto in = parse_str("field prime 3\n"
                        "vertex v\n"
                        "arrow x v v 0\n"
                        "arrow xstar v v -1\n"
                        "arrow t v v -2\n"
                        "d xstar = 1 x x\n"
                        "d t = 1 x xstar + -1 xstar x\n",
                        9);
    REQUIRE(in.dg);
    CHECK(in.dg->d[0].is_zero()); // no d-line for x
    CHECK(in.dg->d[1].terms().size() == 1);
    CHECK(in.dg->d[2].terms().size() == 2);
    CHECK(check_d_squared(*in.dg).pass);

    // degree violations rejected
    CHECK_THROWS_AS(parse_str("field rational\nvertex v\narrow x v v 0\n"
                              "arrow y v v -2\nd y = 1 x\n"),
                    PreconditionError);
    // literal zero differential
    auto z = parse_str("field rational\nvertex v\narrow x v v 0\nd x = 0\n");
    REQUIRE(z.dg);
    CHECK(z.dg->d[0].is_zero());
}

TEST_CASE("augmented, algebra, module and twist files") {
    auto aug = parse_str("field rational\nvertex i\nbasis x 1 i i\nm2 x x = 0\n");
    REQUIRE(aug.augmented);
    CHECK(aug.augmented->basis().size() == 1);
    CHECK(aug.augmented->positive_minimal());

    auto alg = parse_str("field rational\nvertex v\narrow x v v 0\nrelation 1 x x x\n");
    CHECK(alg.relations.size() == 1);

    auto mod = parse_str("field rational\nvertex v\narrow x v v 0\n"
                         "module m\ndim v 2\nmap x 0 0 1 0\n");
    REQUIRE(mod.modules.size() == 1);
    CHECK(mod.modules[0].first == "m");
    CHECK(mod.modules[0].second.dims.at("v") == 2);

    auto tree = parse_str("field prime 7\nvertex a\nvertex b\narrow f a b 0\ntwist f 2 3\n");
    CHECK(tree.lambda[0] == Scalar::from_int(Field::prime(7), 2));
    CHECK(tree.mu[0] == Scalar::from_int(Field::prime(7), 3));
}

TEST_CASE("dgq emission round-trips") {
    Field F = Field::rationals();
    auto q = GradedQuiver::make({"v"}, {{"x", 0, 0, 0, 1}});
    auto W = Potential::make(q, F, 8, {{Scalar::one(F), Path{0, {0, 0, 0}}}});
    auto G = ginzburg_dg(W);
    std::string text = emit_dgq(G.dg);
    auto back = parse_str(text, 8);
    REQUIRE(back.dg);
    CHECK(*back.dg->q == *G.dg.q);
    for (size_t a = 0; a < G.dg.d.size(); ++a)
        CHECK(series_to_grammar(back.dg->d[a]) == series_to_grammar(G.dg.d[a]));
    CHECK(check_d_squared(*back.dg).pass);
}

TEST_CASE("cli jobs against the shipped data") {
    std::string dir = data_dir();

    SECTION("d2check: tampered input fails naming the arrow") {
        JobSpec job;
        job.command = "d2check";
        job.inputs = {dir + "/tampered.dgq"};
        auto [rc, out] = run(job);
        CHECK(rc == 1);
        CHECK(out.find("arrow: t") != std::string::npos);
    }

    SECTION("d2check with the random-product audit") {
        JobSpec job;
        job.command = "d2check";
        job.inputs = {dir + "/gamma3.dgq"};
        job.trunc = 9;
        job.seed = 42;
        auto [rc, out] = run(job);
        CHECK(rc == 0);
        CHECK(out.find("random-products: PASS") != std::string::npos);
    }

    SECTION("cohomology gamma3 human output is frozen") {
        JobSpec job;
        job.command = "cohomology";
        job.inputs = {dir + "/gamma3.dgq"};
        job.trunc = 9;
        job.degrees = {{-1, 0}};
        auto [rc, out] = run(job);
        CHECK(rc == 0);
        CHECK(out ==
              "grading: exact (x=1 xstar=2 t=3)\n"
              "H^-1: 0 for all weights <= 9\n"
              "H^0 [v->v] w=0: 1\n"
              "H^0 [v->v] w=1: 1\n"
              "H^0 total: 2\n");
    }

    SECTION("jacobian human output is frozen") {
        JobSpec job;
        job.command = "jacobian";
        job.inputs = {dir + "/loop-x3.qpot"};
        auto [rc, out] = run(job);
        CHECK(rc == 0);
        CHECK(out ==
              "weight 0: 1\n"
              "weight 1: 1\n"
              "total: 2 (finite: likely)\n"
              "crosscheck: ok (weights <= 5)\n");
    }

    SECTION("machine output is byte-deterministic") {
        for (const char* cmd : {"cohomology", "d2check"}) {
            JobSpec job;
            job.command = cmd;
            job.inputs = {dir + "/gamma3.dgq"};
            job.trunc = 9;
            job.machine = true;
            auto [rc1, out1] = run(job);
            auto [rc2, out2] = run(job);
            CHECK(rc1 == rc2);
            CHECK(out1 == out2);
            CHECK(out1.find('=') != std::string::npos);
        }
    }

    SECTION("ginzburg output re-parses and passes d2check") {
        JobSpec job;
        job.command = "ginzburg";
        job.inputs = {dir + "/cycle3.qpot"};
        auto [rc, out] = run(job);
        CHECK(rc == 0);
        std::istringstream in(out);
        auto parsed = parse_input(in, 8);
        REQUIRE(parsed.dg);
        CHECK(check_d_squared(*parsed.dg).pass);
    }

    SECTION("stable-hom and shifted-hom") {
        JobSpec job;
        job.command = "stable-hom";
        job.inputs = {dir + "/kx3.alg", dir + "/kx3.mod"};
        job.args = {"m2", "k"};
        auto [rc, out] = run(job);
        CHECK(rc == 0);
        CHECK(out.substr(0, 7) == "dim: 1\n");
        job.command = "shifted-hom";
        job.shift_n = 3;
        auto [rc2, out2] = run(job);
        CHECK(rc2 == 0);
        CHECK(out2 == "dim: 0\n");
    }

    SECTION("unknown module is a precondition error") {
        JobSpec job;
        job.command = "stable-hom";
        job.inputs = {dir + "/kx3.alg", dir + "/kx3.mod"};
        job.args = {"nope", "k"};
        std::ostringstream out, err;
        CHECK_THROWS_AS(run_job(job, out, err), PreconditionError);
    }
}

TEST_CASE("process-level exit codes and environment defaults") {
    const char* bin = std::getenv("DGQL_BIN");
    if (!bin) return; // only meaningful under ctest
    std::string dir = data_dir();
    auto sh = [&](const std::string& args, const std::string& env = "") {
        std::string cmd = env + std::string(bin) + " " + args + " >/dev/null 2>&1";
        int st = std::system(cmd.c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    };
    CHECK(sh("d2check " + dir + "/gamma3.dgq --truncate 9") == 0);
    CHECK(sh("d2check " + dir + "/tampered.dgq") == 1);         // verification failure
    CHECK(sh("d2check " + dir + "/no-such-file.dgq") == 2);     // parse
    CHECK(sh("selfinj-check " + dir + "/ka2.alg") == 1);        // rejected
    CHECK(sh("cohomology " + dir + "/tampered.dgq") == 3);      // refuses on d^2 != 0
    CHECK(sh("jacobian " + dir + "/gamma3.dgq") == 3);          // wrong input kind
    // syntax error in the input file
    {
        std::string tmp = "/tmp/dgql_bad_input.qpot";
        std::ofstream f(tmp);
        f << "field rational\nvortex v\n";
        f.close();
        CHECK(sh("jacobian " + tmp) == 2);
    }
    // semantic error: term that is not a cycle
    {
        std::string tmp = "/tmp/dgql_noncycle.qpot";
        std::ofstream f(tmp);
        f << "field rational\nvertex a\nvertex b\narrow f a b 0\nterm 1 f\n";
        f.close();
        CHECK(sh("jacobian " + tmp) == 3);
    }
    // DGQL_TRUNCATE provides the default truncation
    {
        std::string tmp = "/tmp/dgql_env_probe.qpot";
        std::ofstream f(tmp);
        f << "field rational\nvertex v\narrow x v v 0\nterm 1 x x x\n";
        f.close();
        std::string cmd = std::string("DGQL_TRUNCATE=12 ") + bin + " jacobian " + tmp +
                          " --machine > /tmp/dgql_env_out.txt 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        std::ifstream r("/tmp/dgql_env_out.txt");
        std::string text((std::istreambuf_iterator<char>(r)), std::istreambuf_iterator<char>());
        CHECK(text.find("trunc=12") != std::string::npos);
    }
}

TEST_CASE("trivial-path differential terms parse") {
    // a degree -1 loop may have a trivial-path term in its differential
    auto in = parse_str("field rational\nvertex v\narrow eps v v -1\nd eps = 1\n");
    REQUIRE(in.dg);
    REQUIRE(in.dg->d[0].terms().size() == 1);
    CHECK(in.dg->d[0].terms()[0].first.is_trivial());
    CHECK(check_d_squared(*in.dg).pass); // d(eps eps) = eps - eps = 0
}
