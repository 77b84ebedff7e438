#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "swiftdep/config.hpp"

using namespace swiftdep;

namespace {

struct TempFile {
    std::string path;

    explicit TempFile(const std::string& body) {
        static int counter = 0;
        path = "config_case_" + std::to_string(counter++) + ".tmp";
        std::ofstream os(path);
        os << body;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("key=value lines parse with comments and blank lines skipped") {
    TempFile f("# trainer settings\n"
               "\n"
               "lr0 = 0.002\n"
               "  epochs=7\t\n"
               "seed= 99\n"
               "# trailing comment\n");
    auto kv = parse_config_file(f.path);
    CHECK(kv.size() == 3);
    CHECK(kv.at("lr0") == "0.002");
    CHECK(kv.at("epochs") == "7");
    CHECK(kv.at("seed") == "99");
}

TEST_CASE("a repeated key keeps its last value") {
    TempFile f("epochs=3\nepochs=11\n");
    auto kv = parse_config_file(f.path);
    CHECK(kv.at("epochs") == "11");
}

TEST_CASE("values may contain an equals sign") {
    TempFile f("note=a=b\n");
    auto kv = parse_config_file(f.path);
    CHECK(kv.at("note") == "a=b");
}

TEST_CASE("malformed lines report their line number") {
    TempFile f("lr0=0.001\nthis line has no assignment\n");
    try {
        parse_config_file(f.path);
        FAIL("expected a parse failure");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    TempFile g("=0.5\n");
    CHECK_THROWS_AS(parse_config_file(g.path), ParseError);
    CHECK_THROWS_AS(parse_config_file("no_such_config_file.tmp"), ParseError);
}

TEST_CASE("recognized keys land in the trainer configuration") {
    TrainerConfig cfg;
    apply_trainer_config({{"lr0", "0.01"},
                          {"beta1", "0.8"},
                          {"beta2", "0.85"},
                          {"epsilon", "1e-7"},
                          {"batch_size", "16"},
                          {"epochs", "4"},
                          {"anneal_factor", "0.25"},
                          {"anneal_start", "3"},
                          {"anneal_every", "2"},
                          {"dropout_prob", "0.1"},
                          {"unk_replace_prob", "0.2"},
                          {"seed", "12345"},
                          {"word_dim", "10"},
                          {"pos_dim", "6"},
                          {"window", "1"}},
                         cfg);
    CHECK(cfg.lr0 == doctest::Approx(0.01));
    CHECK(cfg.beta1 == doctest::Approx(0.8));
    CHECK(cfg.beta2 == doctest::Approx(0.85));
    CHECK(cfg.epsilon == doctest::Approx(1e-7));
    CHECK(cfg.batch_size == 16);
    CHECK(cfg.epochs == 4);
    CHECK(cfg.anneal_factor == doctest::Approx(0.25));
    CHECK(cfg.anneal_start == 3);
    CHECK(cfg.anneal_every == 2);
    CHECK(cfg.dropout_prob == doctest::Approx(0.1));
    CHECK(cfg.unk_replace_prob == doctest::Approx(0.2));
    CHECK(cfg.seed == 12345u);
    CHECK(cfg.dims.word_dim == 10);
    CHECK(cfg.dims.pos_dim == 6);
    CHECK(cfg.dims.window == 1);
}

TEST_CASE("untouched settings keep their defaults") {
    TrainerConfig cfg;
    TrainerConfig untouched;
    apply_trainer_config({{"epochs", "2"}}, cfg);
    CHECK(cfg.epochs == 2);
    CHECK(cfg.lr0 == doctest::Approx(untouched.lr0));
    CHECK(cfg.batch_size == untouched.batch_size);
    CHECK(cfg.dims.word_dim == untouched.dims.word_dim);
}

TEST_CASE("unknown keys and junk values are rejected") {
    TrainerConfig cfg;
    CHECK_THROWS_AS(apply_trainer_config({{"learning_rate", "0.1"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"epochs", "three"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"lr0", "fast"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"epochs", "99999999999999999999"}}, cfg), ParseError);
}

TEST_CASE("semantic bounds are enforced after parsing") {
    TrainerConfig cfg;
    CHECK_THROWS_AS(apply_trainer_config({{"dropout_prob", "1.5"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"unk_replace_prob", "-0.2"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"lr0", "0"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"lr0", "-0.001"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"batch_size", "0"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"epochs", "-1"}}, cfg), ParseError);
    CHECK_THROWS_AS(apply_trainer_config({{"anneal_every", "0"}}, cfg), ParseError);

    TrainerConfig ok;
    apply_trainer_config({{"dropout_prob", "0"}, {"unk_replace_prob", "1"}}, ok);
    CHECK(ok.dropout_prob == doctest::Approx(0.0));
    CHECK(ok.unk_replace_prob == doctest::Approx(1.0));
}

TEST_CASE("file to trainer pipeline") {
    TempFile f("lr0=0.005\nepochs=3\nwindow=1\n");
    TrainerConfig cfg;
    apply_trainer_config(parse_config_file(f.path), cfg);
    CHECK(cfg.lr0 == doctest::Approx(0.005));
    CHECK(cfg.epochs == 3);
    CHECK(cfg.dims.window == 1);
}
