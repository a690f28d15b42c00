#include "medgkrp/gateway.hpp"

#include "medgkrp/answer_parse.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace medgkrp;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("medgkrp_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("scripted backend identity and default") {
    ScriptedBackend backend("fixture");
    backend.add_rule("Does A directly cause B?", {"[yes]"});
    backend.set_default_reply("[no]");

    ChatRequest req{"", "Does A directly cause B? ...", {}, 0};
    CHECK(backend.complete(req) == "[yes]");
    CHECK(backend.complete(req) == "[yes]"); // identical inputs, identical out
    req.user = "Does X directly cause Y?";
    CHECK(backend.complete(req) == "[no]");
    CHECK(backend.call_count() == 3);
}

TEST_CASE("scripted backend indexes replies by attempt") {
    ScriptedBackend backend;
    backend.add_rule("question", {"maybe", "[no]"});
    ChatRequest req{"", "the question", {}, 0};
    CHECK(backend.complete(req) == "maybe");
    req.attempt = 1;
    CHECK(backend.complete(req) == "[no]");
    req.attempt = 5; // clamped to the last scripted reply
    CHECK(backend.complete(req) == "[no]");
}

TEST_CASE("cache serves repeats without touching the backend") {
    TempDir tmp;
    ResponseCache cache(tmp.path);
    ScriptedBackend backend;
    backend.set_default_reply("[yes]");
    LlmGateway gateway(backend, &cache);

    SamplingParams params;
    CHECK(gateway.ask("edge_check", "sys", "user prompt", params) == "[yes]");
    CHECK(backend.call_count() == 1);
    CHECK(gateway.ask("edge_check", "sys", "user prompt", params) == "[yes]");
    CHECK(backend.call_count() == 1); // cache hit

    // Attempt index is part of the key: a retry never sees the old response.
    CHECK(gateway.ask("edge_check", "sys", "user prompt", params, 1) ==
          "[yes]");
    CHECK(backend.call_count() == 2);
}

TEST_CASE("ask_validated retry budget") {
    ScriptedBackend backend;
    backend.add_rule("question", {"maybe", "[no]"});
    LlmGateway gateway(backend);
    SamplingParams params;
    params.max_retries = 3;

    SUBCASE("first response parses") {
        backend.add_rule("clean", {"[yes]"});
        auto v = gateway.ask_validated<Verdict>(
            "edge_check", "", "a clean prompt", params,
            [](const std::string& raw) { return parse_verdict(raw); });
        CHECK(v == Verdict::yes);
        CHECK(backend.call_count() == 1);
    }

    SUBCASE("parses on the second attempt") {
        auto v = gateway.ask_validated<Verdict>(
            "edge_check", "", "the question", params,
            [](const std::string& raw) { return parse_verdict(raw); });
        CHECK(v == Verdict::no);
        CHECK(backend.call_count() == 2);
    }

    SUBCASE("budget exhausted: retries+1 attempts then throw") {
        ScriptedBackend bad;
        bad.set_default_reply("never parsable");
        LlmGateway g2(bad);
        SamplingParams tight;
        tight.max_retries = 2;
        CHECK_THROWS_AS(
            g2.ask_validated<Verdict>(
                "edge_check", "", "q", tight,
                [](const std::string& raw) { return parse_verdict(raw); }),
            MalformedResponse);
        CHECK(bad.call_count() == 3);
    }
}

TEST_CASE("scripted backend from script file") {
    TempDir tmp;
    auto script = tmp.path / "script.json";
    {
        std::ofstream out(script);
        out << R"({"model":"fixture-model","default":"[no]",
                   "rules":[{"contains":"cause Asthma","replies":["[Smoking]"]}]})";
    }
    auto backend = ScriptedBackend::from_script_file(script);
    CHECK(backend.model_id() == "fixture-model");
    ChatRequest req{"", "factors that directly cause Asthma", {}, 0};
    CHECK(backend.complete(req) == "[Smoking]");
}

TEST_CASE("http backend requires its credential before any network use") {
    unsetenv("MEDGKRP_TEST_MISSING_KEY");
    HttpBackendConfig config;
    config.model = "gpt-4";
    config.api_key_env = "MEDGKRP_TEST_MISSING_KEY";
    CHECK_THROWS_AS(HttpChatBackend{config}, ConfigError);
}
