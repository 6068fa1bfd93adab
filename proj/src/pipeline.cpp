#include "summ/pipeline.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "summ/nn/checkpoint.hpp"
#include "summ/textproc.hpp"

namespace summ {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path, const char* what) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
  json obj = json::parse(is, nullptr, false);
  if (obj.is_discarded())
    throw std::runtime_error(std::string("invalid JSON in ") + what + ": " + path);
  return obj;
}

void write_json_file(const json& obj, const std::string& path, const char* what) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error(std::string("cannot write ") + what + ": " + path);
  os << obj.dump(2) << '\n';
  if (!os) throw std::runtime_error(std::string("write failed for ") + what + ": " + path);
}

}  // namespace

void RunConfig::validate() const {
  if (hidden_dim < 1 || ext_embed_dim < 1 || abs_embed_dim < 1)
    throw std::invalid_argument("model dimensions must be positive");
  if (encoder != "bag" && encoder != "attention")
    throw std::invalid_argument("encoder must be 'bag' or 'attention'");
  if (attention_layers < 1)
    throw std::invalid_argument("attention_layers must be positive");
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be positive");
  if (max_k < 1) throw std::invalid_argument("max_k must be positive");
  if (vocab_limit < 1) throw std::invalid_argument("vocab_limit must be positive");
  if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
    throw std::invalid_argument("adam betas must lie in (0, 1)");
  if (warmup_steps < 1) throw std::invalid_argument("warmup_steps must be positive");
  if (ext_lr <= 0.0 || abs_lr <= 0.0 || rl_lr <= 0.0)
    throw std::invalid_argument("learning rates must be positive");
  if (clip_norm <= 0.0) throw std::invalid_argument("clip_norm must be positive");
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must be in [0, 1]");
  if (stop_lambda < 0.0)
    throw std::invalid_argument("stop_lambda must be nonnegative");
  if (epochs < 0) throw std::invalid_argument("epochs must be nonnegative");
  if (beam_width < 1) throw std::invalid_argument("beam_width must be positive");
  if (max_decode_len < 1)
    throw std::invalid_argument("max_decode_len must be positive");
}

RunConfig load_run_config(const std::string& path) {
  json obj = read_json_file(path, "config");
  if (!obj.is_object())
    throw std::runtime_error("config must be a JSON object: " + path);
  RunConfig cfg;
  for (const auto& [key, value] : obj.items()) {
    try {
      if (key == "hidden_dim") cfg.hidden_dim = value.get<int>();
      else if (key == "ext_embed_dim") cfg.ext_embed_dim = value.get<int>();
      else if (key == "abs_embed_dim") cfg.abs_embed_dim = value.get<int>();
      else if (key == "encoder") cfg.encoder = value.get<std::string>();
      else if (key == "attention_layers") cfg.attention_layers = value.get<int>();
      else if (key == "max_tokens") cfg.max_tokens = value.get<int>();
      else if (key == "max_k") cfg.max_k = value.get<int>();
      else if (key == "vocab_limit") cfg.vocab_limit = value.get<int>();
      else if (key == "beta1") cfg.beta1 = value.get<double>();
      else if (key == "beta2") cfg.beta2 = value.get<double>();
      else if (key == "warmup_steps") cfg.warmup_steps = value.get<int>();
      else if (key == "ext_lr") cfg.ext_lr = value.get<double>();
      else if (key == "abs_lr") cfg.abs_lr = value.get<double>();
      else if (key == "rl_lr") cfg.rl_lr = value.get<double>();
      else if (key == "clip_norm") cfg.clip_norm = value.get<double>();
      else if (key == "gamma") cfg.gamma = value.get<double>();
      else if (key == "stop_lambda") cfg.stop_lambda = value.get<double>();
      else if (key == "epochs") cfg.epochs = value.get<int>();
      else if (key == "beam_width") cfg.beam_width = value.get<int>();
      else if (key == "max_decode_len") cfg.max_decode_len = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<uint64_t>();
      else throw std::runtime_error("unknown config key '" + key + "'");
    } catch (const json::exception&) {
      throw std::runtime_error("config key '" + key + "' has the wrong type");
    }
  }
  cfg.validate();
  return cfg;
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
  json obj;
  obj["hidden_dim"] = cfg.hidden_dim;
  obj["ext_embed_dim"] = cfg.ext_embed_dim;
  obj["abs_embed_dim"] = cfg.abs_embed_dim;
  obj["encoder"] = cfg.encoder;
  obj["attention_layers"] = cfg.attention_layers;
  obj["max_tokens"] = cfg.max_tokens;
  obj["max_k"] = cfg.max_k;
  obj["vocab_limit"] = cfg.vocab_limit;
  obj["beta1"] = cfg.beta1;
  obj["beta2"] = cfg.beta2;
  obj["warmup_steps"] = cfg.warmup_steps;
  obj["ext_lr"] = cfg.ext_lr;
  obj["abs_lr"] = cfg.abs_lr;
  obj["rl_lr"] = cfg.rl_lr;
  obj["clip_norm"] = cfg.clip_norm;
  obj["gamma"] = cfg.gamma;
  obj["stop_lambda"] = cfg.stop_lambda;
  obj["epochs"] = cfg.epochs;
  obj["beam_width"] = cfg.beam_width;
  obj["max_decode_len"] = cfg.max_decode_len;
  obj["seed"] = cfg.seed;
  write_json_file(obj, path, "config");
}

EncoderConfig encoder_config(const RunConfig& cfg) {
  EncoderConfig e;
  e.variant = cfg.encoder == "attention" ? EncoderVariant::MINI_ATTENTION
                                         : EncoderVariant::BAG_MEAN;
  e.embed_dim = cfg.ext_embed_dim;
  e.hidden_dim = cfg.hidden_dim;
  e.num_layers = cfg.attention_layers;
  e.max_tokens = cfg.max_tokens;
  return e;
}

RLConfig rl_config(const RunConfig& cfg, RewardMode mode) {
  RLConfig r;
  r.gamma = cfg.gamma;
  r.stop_lambda = cfg.stop_lambda;
  r.rl_lr = cfg.rl_lr;
  r.reward_mode = mode;
  return r;
}

Vocab build_vocab(const std::vector<DatasetRecord>& records, int vocab_limit) {
  std::vector<std::vector<Token>> texts;
  for (const DatasetRecord& rec : records) {
    for (const std::string& s : rec.article) texts.push_back(normalize_tokens(s));
    for (const std::string& s : rec.abstract) texts.push_back(normalize_tokens(s));
  }
  return Vocab::build(texts, vocab_limit);
}

EvalReport evaluate_summaries(const std::vector<DatasetRecord>& corpus,
                              const std::vector<SystemOutput>& outputs,
                              EvalMode mode) {
  if (corpus.empty()) throw std::invalid_argument("empty evaluation corpus");
  std::map<std::string, const SystemOutput*> by_id;
  for (const SystemOutput& out : outputs) {
    if (!by_id.emplace(out.id, &out).second)
      throw std::runtime_error("duplicate output id '" + out.id + "'");
  }
  std::set<std::string> corpus_ids;
  std::string missing;
  for (const DatasetRecord& rec : corpus) {
    corpus_ids.insert(rec.id);
    if (!by_id.count(rec.id)) missing += (missing.empty() ? "" : ", ") + rec.id;
  }
  if (!missing.empty())
    throw std::runtime_error("missing system outputs for ids: " + missing);
  std::string unknown;
  for (const SystemOutput& out : outputs)
    if (!corpus_ids.count(out.id))
      unknown += (unknown.empty() ? "" : ", ") + out.id;
  if (!unknown.empty())
    throw std::runtime_error("unknown system output ids: " + unknown);

  EvalReport report;
  report.mode = mode;
  report.documents = static_cast<int>(corpus.size());
  std::vector<RougeScore> s1, s2, sl;
  double t1 = 0.0, t2 = 0.0, tl = 0.0;
  for (const DatasetRecord& rec : corpus) {
    const SystemOutput& out = *by_id.at(rec.id);
    std::vector<Sentence> cand, ref;
    std::vector<Token> cand_stream, ref_stream;
    for (const std::string& s : out.summary) {
      cand.push_back(make_sentence(s, true));
      cand_stream.insert(cand_stream.end(), cand.back().tokens.begin(),
                         cand.back().tokens.end());
    }
    for (const std::string& s : rec.abstract) {
      ref.push_back(make_sentence(s, true));
      ref_stream.insert(ref_stream.end(), ref.back().tokens.begin(),
                        ref.back().tokens.end());
    }
    if (mode == EvalMode::FULL_F1) {
      s1.push_back(rouge_n(cand_stream, ref_stream, 1));
      s2.push_back(rouge_n(cand_stream, ref_stream, 2));
      sl.push_back(rouge_l_summary(cand, ref));
    } else {
      t1 += rouge_recall_truncated(cand_stream, ref_stream, RougeVariant::R1);
      t2 += rouge_recall_truncated(cand_stream, ref_stream, RougeVariant::R2);
      tl += rouge_recall_truncated(cand_stream, ref_stream,
                                   RougeVariant::RL_SENTENCE);
    }
  }
  if (mode == EvalMode::FULL_F1) {
    report.r1 = corpus_average(s1);
    report.r2 = corpus_average(s2);
    report.rl = corpus_average(sl);
    report.r_avg = (report.r1.f1 + report.r2.f1 + report.rl.f1) / 3.0;
  } else {
    double n = static_cast<double>(corpus.size());
    report.r1.recall = t1 / n;
    report.r2.recall = t2 / n;
    report.rl.recall = tl / n;
    report.r_avg = (report.r1.recall + report.r2.recall + report.rl.recall) / 3.0;
  }
  return report;
}

namespace {

json load_meta(const std::string& prefix, const std::string& kind) {
  json meta = read_json_file(prefix + ".json", "model bundle");
  if (!meta.is_object() || !meta.contains("kind") || !meta["kind"].is_string())
    throw std::runtime_error("malformed model bundle: " + prefix + ".json");
  if (meta["kind"].get<std::string>() != kind)
    throw std::runtime_error("bundle " + prefix + " is not a " + kind +
                             " checkpoint");
  return meta;
}

Vocab vocab_from_meta(const json& meta, const std::string& prefix) {
  if (!meta.contains("vocab") || !meta["vocab"].is_array())
    throw std::runtime_error("bundle " + prefix + " lacks a vocabulary");
  std::vector<std::string> words;
  for (const json& w : meta["vocab"]) words.push_back(w.get<std::string>());
  return Vocab(words);
}

}  // namespace

void save_extractor_bundle(const ExtractorModel<double>& m, const Vocab& vocab,
                           const std::string& prefix) {
  json meta;
  meta["kind"] = "extractor";
  meta["encoder"] =
      m.cfg.variant == EncoderVariant::MINI_ATTENTION ? "attention" : "bag";
  meta["embed_dim"] = m.cfg.embed_dim;
  meta["hidden_dim"] = m.cfg.hidden_dim;
  meta["attention_layers"] = m.cfg.num_layers;
  meta["max_tokens"] = m.cfg.max_tokens;
  meta["vocab"] = vocab.content_words();
  write_json_file(meta, prefix + ".json", "model bundle");
  nn::save_checkpoint(prefix + ".ckpt", m.store);
}

ExtractorModel<double> load_extractor_bundle(const std::string& prefix,
                                             Vocab& vocab_out) {
  json meta = load_meta(prefix, "extractor");
  vocab_out = vocab_from_meta(meta, prefix);
  EncoderConfig cfg;
  cfg.variant = meta.at("encoder").get<std::string>() == "attention"
                    ? EncoderVariant::MINI_ATTENTION
                    : EncoderVariant::BAG_MEAN;
  cfg.embed_dim = meta.at("embed_dim").get<int>();
  cfg.hidden_dim = meta.at("hidden_dim").get<int>();
  cfg.num_layers = meta.at("attention_layers").get<int>();
  cfg.max_tokens = meta.at("max_tokens").get<int>();
  ExtractorModel<double> m;
  m.build(vocab_out.size(), cfg);
  nn::load_checkpoint(prefix + ".ckpt", m.store);
  return m;
}

void save_abstractor_bundle(const AbstractorModel<double>& m, const Vocab& vocab,
                            const std::string& prefix) {
  json meta;
  meta["kind"] = "abstractor";
  meta["embed_dim"] = m.embed_dim;
  meta["hidden_dim"] = m.hidden_dim;
  meta["vocab"] = vocab.content_words();
  write_json_file(meta, prefix + ".json", "model bundle");
  nn::save_checkpoint(prefix + ".ckpt", m.store);
}

AbstractorModel<double> load_abstractor_bundle(const std::string& prefix,
                                               Vocab& vocab_out) {
  json meta = load_meta(prefix, "abstractor");
  vocab_out = vocab_from_meta(meta, prefix);
  AbstractorModel<double> m;
  m.build(vocab_out.size(), meta.at("embed_dim").get<int>(),
          meta.at("hidden_dim").get<int>());
  nn::load_checkpoint(prefix + ".ckpt", m.store);
  return m;
}

void save_critic_bundle(const CriticModel<double>& c, const std::string& prefix) {
  json meta;
  meta["kind"] = "critic";
  meta["hidden_dim"] = c.hidden_dim;
  write_json_file(meta, prefix + ".json", "model bundle");
  nn::save_checkpoint(prefix + ".ckpt", c.store);
}

CriticModel<double> load_critic_bundle(const std::string& prefix) {
  json meta = load_meta(prefix, "critic");
  CriticModel<double> c =
      CriticModel<double>::with_dims(meta.at("hidden_dim").get<int>());
  nn::load_checkpoint(prefix + ".ckpt", c.store);
  return c;
}

}  // namespace summ
