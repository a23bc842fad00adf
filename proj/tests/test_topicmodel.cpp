#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "commdiff/errors.hpp"
#include "commdiff/lda.hpp"
#include "commdiff/rng.hpp"
#include "helpers.hpp"

using namespace commdiff;

namespace {

struct Planted {
    BowCorpus docs;
    std::vector<std::string> vocab;
    std::vector<int> topic_of_doc;
    int k = 0;
};

// K disjoint vocabulary blocks, docs drawn uniformly within their block.
Planted make_planted(int k, int docs_per_topic, int block_size, int tokens_per_doc,
                     std::uint64_t seed) {
    Planted p;
    p.k = k;
    for (int b = 0; b < k; ++b) {
        for (int w = 0; w < block_size; ++w) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "b%02dw%03d", b, w);
            p.vocab.push_back(buf);
        }
    }
    Rng rng(seed);
    for (int b = 0; b < k; ++b) {
        for (int d = 0; d < docs_per_topic; ++d) {
            std::map<int, int> counts;
            for (int t = 0; t < tokens_per_doc; ++t) {
                ++counts[b * block_size + static_cast<int>(rng.bounded(block_size))];
            }
            p.docs.emplace_back(counts.begin(), counts.end());
            p.topic_of_doc.push_back(b);
        }
    }
    return p;
}

LdaConfig quick_config(std::uint64_t seed, int iterations = 300) {
    LdaConfig c;
    c.iterations = iterations;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("train_lda separates a planted 2-topic corpus") {
    auto planted = make_planted(2, 100, 40, 30, 31);
    TopicModel model = train_lda(planted.docs, planted.vocab, 2, quick_config(7));

    const int block = 40;
    for (int t = 0; t < 2; ++t) {
        double mass_first = 0.0, mass_second = 0.0;
        for (int w = 0; w < block; ++w) mass_first += model.phi(t, w);
        for (int w = block; w < 2 * block; ++w) mass_second += model.phi(t, w);
        CHECK(std::max(mass_first, mass_second) >= 0.9);
    }

    SUBCASE("assignment purity") {
        std::vector<int> assigned;
        for (const auto& a : assign_topics(model)) assigned.push_back(a.topic_index);
        CHECK(testutil::assignment_purity(assigned, planted.topic_of_doc, 2) >= 0.9);
    }
}

TEST_CASE("train_lda rows are stochastic") {
    auto planted = make_planted(3, 30, 20, 25, 17);
    TopicModel model = train_lda(planted.docs, planted.vocab, 3, quick_config(3, 100));
    for (int t = 0; t < model.k; ++t) {
        double sum = 0.0;
        for (int w = 0; w < model.vocab_size(); ++w) {
            sum += model.phi(t, w);
            CHECK(model.phi(t, w) >= 0.0);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    for (int d = 0; d < model.n_docs(); ++d) {
        double sum = 0.0;
        for (double v : model.theta_row(d)) {
            sum += v;
            CHECK(v >= 0.0);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("train_lda is bit-deterministic for a fixed seed") {
    auto planted = make_planted(2, 40, 15, 20, 23);
    TopicModel a = train_lda(planted.docs, planted.vocab, 2, quick_config(42, 120));
    TopicModel b = train_lda(planted.docs, planted.vocab, 2, quick_config(42, 120));
    CHECK(a.topic_word == b.topic_word);
    CHECK(a.doc_topic == b.doc_topic);

    TopicModel c = train_lda(planted.docs, planted.vocab, 2, quick_config(43, 120));
    CHECK(a.topic_word != c.topic_word);
}

TEST_CASE("train_lda input validation") {
    auto planted = make_planted(2, 5, 8, 10, 1);
    CHECK_THROWS_AS(train_lda({}, planted.vocab, 2, quick_config(1)), EmptyCorpusError);
    CHECK_THROWS_AS(train_lda(planted.docs, planted.vocab, 0, quick_config(1)),
                    InvalidHyperparameterError);
    LdaConfig bad = quick_config(1);
    bad.beta = 0.0;
    CHECK_THROWS_AS(train_lda(planted.docs, planted.vocab, 2, bad), InvalidHyperparameterError);
    bad = quick_config(1);
    bad.iterations = 0;
    CHECK_THROWS_AS(train_lda(planted.docs, planted.vocab, 2, bad), InvalidHyperparameterError);
    // all-empty documents carry no tokens
    BowCorpus empties(3);
    CHECK_THROWS_AS(train_lda(empties, planted.vocab, 2, quick_config(1)), EmptyCorpusError);
}

TEST_CASE("perplexity is 1 on a single-term vocabulary") {
    BowCorpus docs = {{{0, 5}}, {{0, 3}}};
    TopicModel model = train_lda(docs, {"only"}, 2, quick_config(9, 50));
    CHECK(perplexity(model, docs) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perplexity is positive, finite, and favors the true K") {
    auto planted = make_planted(3, 60, 25, 25, 77);
    BowCorpus train(planted.docs.begin(), planted.docs.end() - 30);
    BowCorpus heldout(planted.docs.end() - 30, planted.docs.end());

    TopicModel true_k = train_lda(train, planted.vocab, 3, quick_config(5));
    TopicModel k1 = train_lda(train, planted.vocab, 1, quick_config(5));
    const double pp_true = perplexity(true_k, heldout);
    const double pp_k1 = perplexity(k1, heldout);
    CHECK(pp_true > 0.0);
    CHECK(std::isfinite(pp_true));
    CHECK(pp_true <= pp_k1);
}

TEST_CASE("perplexity serial equals parallel bitwise") {
    auto planted = make_planted(2, 50, 20, 20, 3);
    BowCorpus heldout(planted.docs.begin(), planted.docs.begin() + 40);
    TopicModel model = train_lda(planted.docs, planted.vocab, 2, quick_config(2, 100));
    CHECK(perplexity(model, heldout, 100, Exec::serial) ==
          perplexity(model, heldout, 100, Exec::parallel));
}

TEST_CASE("perplexity rejects empty held-out input") {
    auto planted = make_planted(2, 10, 10, 10, 4);
    TopicModel model = train_lda(planted.docs, planted.vocab, 2, quick_config(2, 50));
    CHECK_THROWS_AS(perplexity(model, {}), EmptyHeldoutError);
    BowCorpus empties(4);  // documents with no in-vocabulary tokens
    CHECK_THROWS_AS(perplexity(model, empties), EmptyHeldoutError);
}

TEST_CASE("select_k recovers a plausible k on a planted corpus") {
    auto planted = make_planted(3, 50, 30, 25, 55);
    auto sel = select_k(planted.docs, planted.vocab, {1, 2, 3, 4, 5, 6}, 0.2,
                        quick_config(11, 200));
    REQUIRE(sel.curve.size() == 6);
    CHECK(sel.k_best >= 2);
    CHECK(sel.k_best <= 4);
    for (const auto& [k, pp] : sel.curve) CHECK(pp > 0.0);
}

TEST_CASE("select_k with a singleton range") {
    auto planted = make_planted(2, 20, 10, 15, 6);
    auto sel = select_k(planted.docs, planted.vocab, {4}, 0.25, quick_config(1, 80));
    CHECK(sel.k_best == 4);
}

TEST_CASE("select_k validation") {
    auto planted = make_planted(2, 20, 10, 15, 6);
    CHECK_THROWS_AS(select_k(planted.docs, planted.vocab, {}, 0.2, quick_config(1)),
                    InvalidHyperparameterError);
    CHECK_THROWS_AS(select_k(planted.docs, planted.vocab, {2}, 0.0, quick_config(1)),
                    InvalidHyperparameterError);
    CHECK_THROWS_AS(select_k(planted.docs, planted.vocab, {2}, 1.0, quick_config(1)),
                    InvalidHyperparameterError);
}

TEST_CASE("pick_k_from_curve applies the 0.5% tie rule") {
    CHECK(pick_k_from_curve({{2, 100.0}, {3, 99.8}}) == 2);   // within 0.5%: smaller k
    CHECK(pick_k_from_curve({{2, 100.0}, {3, 90.0}}) == 3);   // clear winner
    CHECK(pick_k_from_curve({{1, 120.0}, {2, 100.4}, {3, 100.0}}) == 2);
    CHECK(pick_k_from_curve({{5, 50.0}}) == 5);
}

TEST_CASE("assign_topic returns the argmax") {
    CHECK(assign_topic(std::vector<double>{0.1, 0.7, 0.2}).topic_index == 1);
    CHECK(assign_topic(std::vector<double>{0.1, 0.7, 0.2}).probability == doctest::Approx(0.7));
    SUBCASE("ties break toward the lowest index") {
        auto a = assign_topic(std::vector<double>{0.5, 0.5});
        CHECK(a.topic_index == 0);
        CHECK(a.probability == doctest::Approx(0.5));
    }
    SUBCASE("uniform over 7") {
        std::vector<double> u(7, 1.0 / 7.0);
        auto a = assign_topic(u);
        CHECK(a.topic_index == 0);
        CHECK(a.probability == doctest::Approx(1.0 / 7.0));
    }
    SUBCASE("invalid distributions") {
        CHECK_THROWS_AS(assign_topic(std::vector<double>{0.5, -0.1, 0.6}),
                        InvalidDistributionError);
        CHECK_THROWS_AS(assign_topic(std::vector<double>{0.4, 0.4}), InvalidDistributionError);
        CHECK_THROWS_AS(assign_topic(std::vector<double>{}), InvalidDistributionError);
    }
}

TEST_CASE("assign_topic is invariant under positive rescaling") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + static_cast<int>(rng.bounded(6));
        std::vector<double> row(k);
        double sum = 0.0;
        for (double& v : row) {
            v = rng.u01() + 1e-6;
            sum += v;
        }
        for (double& v : row) v /= sum;
        const auto base = assign_topic(row);

        const double scale = 0.1 + 5.0 * rng.u01();
        std::vector<double> scaled(row);
        double scaled_sum = 0.0;
        for (double& v : scaled) {
            v *= scale;
            scaled_sum += v;
        }
        for (double& v : scaled) v /= scaled_sum;
        CHECK(assign_topic(scaled).topic_index == base.topic_index);
    }
}

TEST_CASE("permuting topic indices permutes assignments identically") {
    auto planted = make_planted(3, 30, 15, 20, 91);
    TopicModel model = train_lda(planted.docs, planted.vocab, 3, quick_config(8, 150));

    const std::vector<int> perm = {2, 0, 1};  // new index of old topic t
    TopicModel permuted = model;
    for (int t = 0; t < 3; ++t) {
        for (int w = 0; w < model.vocab_size(); ++w) {
            permuted.topic_word[perm[t] * model.vocab_size() + w] = model.phi(t, w);
        }
        for (int d = 0; d < model.n_docs(); ++d) {
            permuted.doc_topic[d * 3 + perm[t]] = model.theta_row(d)[t];
        }
    }
    auto base = assign_topics(model);
    auto moved = assign_topics(permuted);
    for (int d = 0; d < model.n_docs(); ++d) {
        CHECK(moved[d].topic_index == perm[base[d].topic_index]);
        CHECK(moved[d].probability == base[d].probability);
    }
}

TEST_CASE("top_keywords sorts by probability with lexicographic ties") {
    TopicModel model;
    model.k = 1;
    model.vocab = {"x", "y", "z"};
    model.topic_word = {0.5, 0.3, 0.2};
    model.doc_topic = {1.0};
    CHECK(top_keywords(model, 0, 2) == std::vector<std::string>{"x", "y"});
    CHECK(top_keywords(model, 0, 10) == std::vector<std::string>{"x", "y", "z"});  // clamp to V

    SUBCASE("lexicographic tie-break") {
        model.topic_word = {0.25, 0.5, 0.25};
        CHECK(top_keywords(model, 0, 3) == std::vector<std::string>{"y", "x", "z"});
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(top_keywords(model, 1, 2), TopicIndexOutOfRangeError);
        CHECK_THROWS_AS(top_keywords(model, -1, 2), TopicIndexOutOfRangeError);
        CHECK_THROWS_AS(top_keywords(model, 0, 0), InputError);
    }
}

TEST_CASE("top_keywords on a planted model stay within the planted block") {
    const int block = 25;
    auto planted = make_planted(2, 80, block, 25, 13);
    TopicModel model = train_lda(planted.docs, planted.vocab, 2, quick_config(19));
    for (int t = 0; t < 2; ++t) {
        auto keywords = top_keywords(model, t, 5);
        // identify the block by the topic's top keyword, then check the rest
        const bool first_block = keywords[0] < planted.vocab[block];
        for (const auto& kw : keywords) {
            if (first_block) {
                CHECK(kw < planted.vocab[block]);
            } else {
                CHECK(kw >= planted.vocab[block]);
            }
        }
    }
}

TEST_CASE("model persistence round-trips assignments exactly") {
    auto planted = make_planted(2, 30, 12, 18, 44);
    TopicModel model = train_lda(planted.docs, planted.vocab, 2, quick_config(21, 100));

    auto dir = testutil::temp_dir("lda_model");
    const std::string path = (dir / "model.txt").string();
    save_model(model, path);
    TopicModel loaded = load_model(path);

    CHECK(loaded.k == model.k);
    CHECK(loaded.alpha == model.alpha);
    CHECK(loaded.beta == model.beta);
    CHECK(loaded.seed == model.seed);
    CHECK(loaded.vocab == model.vocab);
    CHECK(loaded.topic_word == model.topic_word);  // bitwise: %.17g round-trip
    CHECK(loaded.doc_topic == model.doc_topic);

    auto a = assign_topics(model);
    auto b = assign_topics(loaded);
    REQUIRE(a.size() == b.size());
    for (std::size_t d = 0; d < a.size(); ++d) {
        CHECK(a[d].topic_index == b[d].topic_index);
        CHECK(a[d].probability == b[d].probability);
    }

    CHECK_THROWS_AS(load_model((dir / "missing.txt").string()), InputError);
}
