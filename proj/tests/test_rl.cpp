#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "summ/rl.hpp"
#include "summ/textproc.hpp"
#include "test_util.hpp"

using namespace summ;
using nn::Expr;
using nn::Mat;
using nn::Tape;

namespace {

Document make_doc(const std::vector<std::string>& raws,
                  const std::string& id = "d") {
  Document d;
  d.id = id;
  for (const auto& r : raws) d.sentences.push_back(make_sentence(r));
  return d;
}

std::vector<Sentence> sents(const std::vector<std::string>& raws) {
  std::vector<Sentence> out;
  for (const auto& r : raws) out.push_back(make_sentence(r));
  return out;
}

Vocab toy_vocab() {
  return Vocab({"a", "b", "c", "d", "e", "f", "g", "h", "x", "y"});
}

ExtractorModel<double> toy_actor(uint64_t seed = 7) {
  EncoderConfig cfg;
  cfg.variant = EncoderVariant::BAG_MEAN;
  cfg.embed_dim = 3;
  cfg.hidden_dim = 4;
  cfg.max_tokens = 64;
  ExtractorModel<double> m;
  m.build(toy_vocab().size(), cfg);
  m.init_weights(seed);
  return m;
}

}  // namespace

TEST_CASE("config validation") {
  RLConfig cfg;
  CHECK(cfg.gamma == 0.95);
  CHECK(cfg.stop_lambda == 0.08);
  CHECK(cfg.rl_lr == 4e-6);
  CHECK(cfg.reward_mode == RewardMode::SUMMARY_LEVEL);
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.gamma = 1.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.gamma = 1.0;
  cfg.stop_lambda = -0.01;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("summary rewards telescope the running score") {
  // picking "a b c" then "e f" against ["a b c d", "e f"]
  std::vector<Sentence> summary = sents({"a b c", "e f"});
  ReferenceSummary ref = sents({"a b c d", "e f"});
  RLConfig cfg;

  std::vector<double> r = shaped_rewards(summary, ref, false, cfg);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r[0] + r[1] == doctest::Approx(10.0 / 11.0).epsilon(1e-12));
  CHECK(r[0] == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(r[1] == doctest::Approx(0.2424).epsilon(1e-3));

  // the stop step earns the scaled final score on top
  std::vector<double> rs = shaped_rewards(summary, ref, true, cfg);
  REQUIRE(rs.size() == 3);
  CHECK(rs[0] == r[0]);
  CHECK(rs[1] == r[1]);
  CHECK(rs[2] == doctest::Approx(0.08 * 10.0 / 11.0).epsilon(1e-12));
}

TEST_CASE("empty selection with stop earns zero") {
  ReferenceSummary ref = sents({"a b"});
  RLConfig cfg;
  std::vector<double> r = shaped_rewards({}, ref, true, cfg);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 0.0);
  cfg.stop_lambda = 0.3;
  CHECK(shaped_rewards({}, ref, true, cfg)[0] == 0.0);
  CHECK(shaped_rewards({}, ref, false, cfg).empty());
}

TEST_CASE("sentence rewards are matched positionally") {
  std::vector<Sentence> summary = sents({"a b c", "e f", "x y"});
  ReferenceSummary ref = sents({"a b c d", "e f"});
  RLConfig cfg;
  cfg.reward_mode = RewardMode::SENTENCE_LEVEL;

  std::vector<double> r = shaped_rewards(summary, ref, false, cfg);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r[2] == 0.0);  // beyond the reference length

  // stop bonus still uses the summary-level score
  std::vector<double> rs = shaped_rewards(summary, ref, true, cfg);
  REQUIRE(rs.size() == 4);
  double final_score = rouge_l_summary(summary, ref).f1;
  CHECK(rs[3] == doctest::Approx(0.08 * final_score).epsilon(1e-12));
}

TEST_CASE("replacement mode keeps only the stop reward") {
  std::vector<Sentence> summary = sents({"a b c", "e f"});
  ReferenceSummary ref = sents({"a b c d", "e f"});
  RLConfig cfg;
  cfg.stop_bonus_replaces = true;

  std::vector<double> rs = shaped_rewards(summary, ref, true, cfg);
  REQUIRE(rs.size() == 3);
  CHECK(rs[0] == 0.0);
  CHECK(rs[1] == 0.0);
  CHECK(rs[2] == doctest::Approx(0.08 * 10.0 / 11.0).epsilon(1e-12));

  // without a stop action the flag changes nothing
  std::vector<double> r = shaped_rewards(summary, ref, false, cfg);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stop bonus appears exactly once and only when stopped") {
  std::vector<Sentence> summary = sents({"a b c", "e f"});
  ReferenceSummary ref = sents({"a b c d", "e f"});
  RLConfig cfg;
  CHECK(shaped_rewards(summary, ref, false, cfg).size() == summary.size());
  CHECK(shaped_rewards(summary, ref, true, cfg).size() == summary.size() + 1);
}

TEST_CASE("discounted returns") {
  std::vector<double> R = discounted_returns({0.5, 0.3}, 0.95);
  REQUIRE(R.size() == 2);
  CHECK(R[0] == 0.5 + 0.95 * 0.3);
  CHECK(R[0] == doctest::Approx(0.785).epsilon(1e-15));
  CHECK(R[1] == 0.3);

  std::vector<double> r = {0.2, -0.1, 0.4, 0.05};
  CHECK(discounted_returns(r, 0.0) == r);

  std::vector<double> R1 = discounted_returns(r, 1.0);
  CHECK(R1[0] == doctest::Approx(0.55).epsilon(1e-15));

  // recursion holds bitwise for arbitrary inputs
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> rw(1 + rng.uniform_int(8));
    for (double& x : rw) x = rng.uniform(-1.0, 1.0);
    double g = rng.uniform();
    std::vector<double> Rt = discounted_returns(rw, g);
    for (size_t t = 0; t < rw.size(); ++t) {
      double next = (t + 1 < rw.size()) ? Rt[t + 1] : 0.0;
      CHECK(Rt[t] == rw[t] + g * next);
    }
  }
  CHECK(discounted_returns({}, 0.9).empty());
}

TEST_CASE("advantage is returns minus values") {
  std::vector<double> A = advantage({1.0}, {0.4});
  REQUIRE(A.size() == 1);
  CHECK(A[0] == doctest::Approx(0.6).epsilon(1e-15));

  std::vector<double> R = {0.3, -0.2, 0.9};
  std::vector<double> zero = advantage(R, R);
  for (double a : zero) CHECK(a == 0.0);

  // common shift cancels
  std::vector<double> Rs = {0.3 + 0.5, -0.2 + 0.5, 0.9 + 0.5};
  std::vector<double> Vs = {0.1 + 0.5, 0.0 + 0.5, -0.3 + 0.5};
  std::vector<double> base = advantage(R, {0.1, 0.0, -0.3});
  std::vector<double> shifted = advantage(Rs, Vs);
  for (size_t i = 0; i < base.size(); ++i)
    CHECK(shifted[i] == doctest::Approx(base[i]).epsilon(1e-12));

  CHECK_THROWS_AS(advantage({1.0, 2.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("critic loss values and gradient") {
  nn::ParamStore<double> store;
  nn::Parameter<double>& v = store.add("v", 3, 1);
  v.value << 0.2, -0.4, 0.7;
  std::vector<double> R = {-0.1, 0.3, 0.5};

  auto build = [&](Tape<double>& t) {
    Expr<double> ve = nn::leaf(t, v);
    std::vector<Expr<double>> vals = {nn::pick(ve, 0), nn::pick(ve, 1),
                                      nn::pick(ve, 2)};
    return critic_loss(t, vals, R);
  };

  {
    Tape<double> t;
    double loss = build(t).val()(0, 0);
    double want = 0.0;
    for (int i = 0; i < 3; ++i)
      want += (v.value(i, 0) - R[i]) * (v.value(i, 0) - R[i]) / 3.0;
    CHECK(loss == doctest::Approx(want).epsilon(1e-15));
  }
  {
    // V = R gives zero; [0] vs [1] gives one
    Tape<double> t;
    Expr<double> c = nn::constant(t, Mat<double>::Zero(1, 1));
    CHECK(critic_loss(t, {c}, {0.0}).val()(0, 0) == 0.0);
    CHECK(critic_loss(t, {c}, {1.0}).val()(0, 0) == 1.0);
    CHECK_THROWS_AS(critic_loss(t, {c}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(critic_loss(t, std::vector<Expr<double>>{},
                                std::vector<double>{}),
                    std::invalid_argument);
  }
  // analytic gradient is 2(V - R)/k
  store.zero_grad();
  {
    Tape<double> t;
    t.backward(build(t));
  }
  for (int i = 0; i < 3; ++i)
    CHECK(v.grad(i, 0) ==
          doctest::Approx(2.0 * (v.value(i, 0) - R[i]) / 3.0).epsilon(1e-9));
  testutil::grad_check(store, build, 1e-6, 1e-6);
}

TEST_CASE("actor loss gradients") {
  nn::ParamStore<double> store;
  nn::Parameter<double>& logits = store.add("logits", 2, 1);
  logits.value << 0.2, -0.1;

  auto loss_for = [&](Tape<double>& t, int action, double adv) {
    Expr<double> p = nn::softmax_vec(nn::leaf(t, logits));
    Expr<double> lp = nn::log_e(nn::pick(p, action));
    return actor_loss(t, {lp}, {adv});
  };

  // zero advantage: zero gradient
  store.zero_grad();
  {
    Tape<double> t;
    Expr<double> p = nn::softmax_vec(nn::leaf(t, logits));
    std::vector<Expr<double>> lps = {nn::log_e(nn::pick(p, 0)),
                                     nn::log_e(nn::pick(p, 1))};
    t.backward(actor_loss(t, lps, {0.0, 0.0}));
  }
  CHECK(logits.grad.norm() == 0.0);

  // opposite advantages mirror the gradient
  store.zero_grad();
  {
    Tape<double> t;
    t.backward(loss_for(t, 0, 1.0));
  }
  Mat<double> gplus = logits.grad;
  store.zero_grad();
  {
    Tape<double> t;
    t.backward(loss_for(t, 0, -1.0));
  }
  CHECK((gplus + logits.grad).norm() == doctest::Approx(0.0).epsilon(1e-15));

  // one positive-advantage update raises the action's probability
  double before;
  {
    Tape<double> t;
    before = nn::softmax_vec(nn::leaf(t, logits)).val()(0, 0);
  }
  store.zero_grad();
  {
    Tape<double> t;
    t.backward(loss_for(t, 0, 1.0));
  }
  logits.value -= 0.05 * logits.grad;
  double after;
  {
    Tape<double> t;
    after = nn::softmax_vec(nn::leaf(t, logits)).val()(0, 0);
  }
  CHECK(after > before);

  {
    Tape<double> t;
    Expr<double> p = nn::softmax_vec(nn::leaf(t, logits));
    Expr<double> lp = nn::log_e(nn::pick(p, 0));
    CHECK_THROWS_AS(actor_loss(t, {lp}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(actor_loss(t, std::vector<Expr<double>>{},
                               std::vector<double>{}),
                    std::invalid_argument);
  }
}

TEST_CASE("two-armed bandit converges to the rewarded arm") {
  nn::ParamStore<double> store;
  nn::Parameter<double>& logits = store.add("logits", 2, 1);
  nn::Adam<double> adam(store.all());
  Rng rng(3);
  for (int step = 0; step < 500; ++step) {
    Tape<double> t;
    Expr<double> p = nn::softmax_vec(nn::leaf(t, logits));
    int arm = rng.uniform() < p.val()(0, 0) ? 0 : 1;
    Expr<double> lp = nn::log_e(nn::pick(p, arm));
    double adv = arm == 0 ? 1.0 : -1.0;
    store.zero_grad();
    t.backward(actor_loss(t, {lp}, {adv}));
    adam.step(0.05);
  }
  Tape<double> t;
  double p0 = nn::softmax_vec(nn::leaf(t, logits)).val()(0, 0);
  CHECK(p0 > 0.99);
}

TEST_CASE("critic clones decoder weights and starts at zero value") {
  auto actor = toy_actor();
  auto critic = CriticModel<double>::make(actor, 42);
  CHECK(critic.store.size() == 11);
  CHECK((critic.store.at("critic.dec.wx").value.array() ==
         actor.store.at("ext.dec.wx").value.array())
            .all());
  CHECK((critic.store.at("critic.glimpse.v").value.array() ==
         actor.store.at("ext.glimpse.v").value.array())
            .all());
  CHECK(critic.store.at("critic.val.v").value.norm() == 0.0);
  CHECK(critic.store.at("critic.val.b").value.norm() == 0.0);
  CHECK(critic.store.at("critic.val.we").value.norm() > 0.0);

  Vocab v = toy_vocab();
  Document doc = make_doc({"a b c", "d e", "f g"});
  Tape<double> t;
  auto enc = encode(t, actor, v, doc);
  auto vals = critic_values(t, critic, enc.H, enc.n, {0, 2, Episode::kStop});
  REQUIRE(vals.size() == 3);
  for (const auto& e : vals) CHECK(e.val()(0, 0) == 0.0);

  CHECK_THROWS_AS(critic_values(t, critic, enc.H, enc.n, {5}),
                  std::invalid_argument);
}

TEST_CASE("joint actor critic loss passes finite differences") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(19);
  auto critic = CriticModel<double>::make(actor, 20);
  // break the exact-clone symmetry and the zero value head
  Rng jitter(5);
  for (auto* p : critic.store.all()) testutil::fill_random(*p, jitter, -0.3, 0.3);
  Document doc = make_doc({"a b c", "d e f", "g h", "x y"});
  std::vector<int> forced = {1, 0, 4};  // last entry is the stop action
  std::vector<int> walk = {1, 0, Episode::kStop};
  std::vector<double> A = {0.7, -0.4, 0.2};
  std::vector<double> R = {0.9, 0.1, -0.3};

  auto build = [&](Tape<double>& t) {
    EpisodeNodes<double> ep = forced_episode(t, actor, v, doc, forced);
    auto vals = critic_values(t, critic, ep.H, ep.n, walk);
    return nn::add(actor_loss(t, ep.log_probs, A), critic_loss(t, vals, R));
  };
  testutil::grad_check(actor.store, build);
  testutil::grad_check(critic.store, build);
}

TEST_CASE("critic loss reaches the shared encoder") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(23);
  auto critic = CriticModel<double>::make(actor, 24);
  Rng jitter(6);
  for (auto* p : critic.store.all()) testutil::fill_random(*p, jitter, -0.3, 0.3);
  Document doc = make_doc({"a b c", "d e f", "g h"});

  actor.store.zero_grad();
  critic.store.zero_grad();
  Tape<double> t;
  auto enc = encode(t, actor, v, doc);
  auto vals = critic_values(t, critic, enc.H, enc.n, {0, Episode::kStop});
  t.backward(critic_loss(t, vals, {0.4, 0.4}));
  CHECK(actor.store.at("ext.enc.proj.w").grad.norm() > 0.0);
  CHECK(actor.store.at("ext.embed").grad.norm() > 0.0);
  CHECK(critic.store.at("critic.val.v").grad.norm() > 0.0);
  // the actor's own heads are untouched by the critic loss
  CHECK(actor.store.at("ext.ptr.v").grad.norm() == 0.0);
  CHECK(actor.store.at("ext.dec.wx").grad.norm() == 0.0);
}

TEST_CASE("sampled episodes telescope to the final score") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(29);
  Document doc = make_doc({"a b c", "b c d", "e f", "g h x"});
  ReferenceSummary ref = sents({"a b c d", "e f"});
  RLConfig cfg;
  cfg.gamma = 1.0;
  cfg.stop_lambda = 0.0;
  int stopped_seen = 0, truncated_seen = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Episode ep = run_rl_episode(actor, (CriticModel<double>*)nullptr, v, doc,
                                ref, cfg, 3, seed);
    CHECK(ep.doc_id == "d");
    if (ep.stopped())
      ++stopped_seen;
    else
      ++truncated_seen;
    double R1 = ep.returns.empty() ? 0.0 : ep.returns[0];
    CHECK(std::fabs(R1 - ep.final_return) < 1e-12);
    for (double lp : ep.log_probs) CHECK(lp <= 0.0);
  }
  // both terminations appear across seeds
  CHECK(stopped_seen > 0);
  CHECK(truncated_seen > 0);
}

TEST_CASE("episode records carry critic values") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(31);
  auto critic = CriticModel<double>::make(actor, 32);
  Rng jitter(7);
  testutil::fill_random(critic.store.at("critic.val.v"), jitter, -0.2, 0.2);
  Document doc = make_doc({"a b c", "d e", "f g", "h x"});
  ReferenceSummary ref = sents({"a b c", "f g"});
  RLConfig cfg;
  Episode ep = run_rl_episode(actor, &critic, v, doc, ref, cfg, 3, 4);
  REQUIRE(ep.values.size() == ep.actions.size());
  bool any_nonzero = false;
  for (double x : ep.values) any_nonzero = any_nonzero || x != 0.0;
  CHECK(any_nonzero);
  CHECK_NOTHROW(check_episode(ep, cfg.gamma));
}

TEST_CASE("episode checker flags corrupted records") {
  Episode ep;
  ep.doc_id = "x";
  ep.actions = {2, 0, Episode::kStop};
  ep.log_probs = {-0.1, -0.2, -0.3};
  ep.shaped_rewards = {0.4, 0.1, 0.02};
  ep.returns = discounted_returns(ep.shaped_rewards, 0.9);
  ep.values = {0.0, 0.0, 0.0};
  CHECK_NOTHROW(check_episode(ep, 0.9));

  Episode bad = ep;
  bad.returns[0] += 1e-9;
  CHECK_THROWS_AS(check_episode(bad, 0.9), std::invalid_argument);

  bad = ep;
  bad.values.pop_back();
  CHECK_THROWS_AS(check_episode(bad, 0.9), std::invalid_argument);

  bad = ep;
  bad.actions = {2, Episode::kStop, 0};
  CHECK_THROWS_AS(check_episode(bad, 0.9), std::invalid_argument);

  bad = ep;
  bad.actions = {2, 2, Episode::kStop};
  CHECK_THROWS_AS(check_episode(bad, 0.9), std::invalid_argument);

  bad = ep;
  bad.actions = {2, -3, Episode::kStop};
  CHECK_THROWS_AS(check_episode(bad, 0.9), std::invalid_argument);
}

namespace {

std::vector<Mat<double>> snapshot(const nn::ParamStore<double>& store) {
  std::vector<Mat<double>> out;
  for (auto* p : store.all()) out.push_back(p->value);
  return out;
}

bool identical(const std::vector<Mat<double>>& a,
               const std::vector<Mat<double>>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols() ||
        !(a[i].array() == b[i].array()).all())
      return false;
  return true;
}

struct ToyCorpus {
  std::vector<Document> docs;
  std::vector<ReferenceSummary> refs;
};

ToyCorpus toy_corpus() {
  ToyCorpus c;
  c.docs = {make_doc({"a b c", "b c d", "e f", "g h"}, "d0"),
            make_doc({"x y", "a b c d", "e f g"}, "d1"),
            make_doc({"e f", "g h x", "a b"}, "d2")};
  c.refs = {sents({"a b c d", "e f"}), sents({"a b c d"}),
            sents({"e f", "a b"})};
  return c;
}

}  // namespace

TEST_CASE("zero learning rate leaves parameters bit identical") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(37);
  auto critic = CriticModel<double>::make(actor, 38);
  ToyCorpus c = toy_corpus();
  RLConfig cfg;
  cfg.rl_lr = 0.0;
  auto a0 = snapshot(actor.store);
  auto c0 = snapshot(critic.store);
  auto stats = a2c_finetune(actor, critic, c.docs, c.refs, v, cfg, 3, 1, 99);
  CHECK(stats.size() == 1);
  CHECK(identical(a0, snapshot(actor.store)));
  CHECK(identical(c0, snapshot(critic.store)));
}

TEST_CASE("finetuning is deterministic under a fixed seed") {
  Vocab v = toy_vocab();
  ToyCorpus c = toy_corpus();
  RLConfig cfg;
  cfg.rl_lr = 1e-4;

  auto run = [&]() {
    auto actor = toy_actor(41);
    auto critic = CriticModel<double>::make(actor, 42);
    auto stats = a2c_finetune(actor, critic, c.docs, c.refs, v, cfg, 3, 2, 7);
    return std::make_tuple(snapshot(actor.store), snapshot(critic.store),
                           stats);
  };
  auto [a1, c1, s1] = run();
  auto [a2, c2, s2] = run();
  CHECK(identical(a1, a2));
  CHECK(identical(c1, c2));
  REQUIRE(s1.size() == s2.size());
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].mean_return == s2[i].mean_return);
    CHECK(s1[i].mean_len == s2[i].mean_len);
    CHECK(s1[i].stop_rate == s2[i].stop_rate);
  }
}

TEST_CASE("finetuning reports sane epoch stats") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(43);
  auto critic = CriticModel<double>::make(actor, 44);
  ToyCorpus c = toy_corpus();
  RLConfig cfg;
  cfg.rl_lr = 1e-4;
  cfg.normalize_advantage = true;
  int calls = 0;
  auto stats = a2c_finetune(
      actor, critic, c.docs, c.refs, v, cfg, 2, 3, 13, nullptr,
      [&](int epoch, const RLEpochStats& st) {
        CHECK(epoch == calls);
        CHECK(st.stop_rate >= 0.0);
        ++calls;
      });
  CHECK(calls == 3);
  REQUIRE(stats.size() == 3);
  for (const auto& st : stats) {
    CHECK(st.mean_return >= 0.0);
    CHECK(st.mean_return <= 1.0);
    CHECK(st.mean_len <= 2.0);
    CHECK(st.stop_rate >= 0.0);
    CHECK(st.stop_rate <= 1.0);
  }
  CHECK_THROWS_AS(
      a2c_finetune(actor, critic, c.docs, {c.refs[0]}, v, cfg, 2, 1, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(a2c_finetune(actor, critic, {}, {}, v, cfg, 2, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("policy evaluation scores greedy extraction") {
  Vocab v = toy_vocab();
  auto actor = toy_actor(47);
  ToyCorpus c = toy_corpus();
  RLEpochStats st = evaluate_policy(actor, c.docs, c.refs, v, 3);
  CHECK(st.mean_return >= 0.0);
  CHECK(st.mean_return <= 1.0);
  CHECK(st.mean_len >= 0.0);
  CHECK(st.mean_len <= 3.0);
  // greedy evaluation is deterministic
  RLEpochStats st2 = evaluate_policy(actor, c.docs, c.refs, v, 3);
  CHECK(st.mean_return == st2.mean_return);
  CHECK(st.mean_len == st2.mean_len);
  CHECK(st.stop_rate == st2.stop_rate);
}
