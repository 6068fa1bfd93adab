#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "summ/pipeline.hpp"
#include "summ/synth.hpp"
#include "summ/textproc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace summ;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "run configuration JSON file");
  sub->add_option("--seed", c.seed, "seed override")
      ->each([&c](const std::string&) { c.seed_set = true; });
  sub->add_option("--out-dir", c.out_dir, "directory for outputs");
}

RunConfig base_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = load_run_config(c.config_path);
  if (c.seed_set) cfg.seed = c.seed;
  return cfg;
}

/// Validates, creates the output directory and records the resolved config.
void finalize_config(const RunConfig& cfg, const Common& c) {
  cfg.validate();
  fs::create_directories(c.out_dir);
  save_run_config(cfg, c.out_dir + "/resolved_config.json");
}

std::string out_path(const Common& c, const std::string& name) {
  return c.out_dir + "/" + name;
}

std::vector<DatasetRecord> load_corpus(const std::string& path) {
  IngestResult r = ingest_jsonl(path);
  if (r.rejected > 0)
    std::cerr << "warning: rejected " << r.rejected
              << " records with empty content\n";
  return std::move(r.records);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write: " + path);
  return os;
}

json score_json(const RougeScore& s) {
  return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

json label_row(const OracleLabel& l) {
  return json{{"id", l.doc_id},
              {"selected", l.selected},
              {"precision", l.score.precision},
              {"recall", l.score.recall},
              {"f1", l.score.f1}};
}

/// Loads {"id", "selected"} rows and orders them to match `docs`.
std::vector<OracleLabel> load_labels_for(const std::string& path,
                                         const std::vector<Document>& docs) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open labels: " + path);
  std::map<std::string, OracleLabel> by_id;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
        !obj.contains("selected"))
      throw std::runtime_error("labels line " + std::to_string(line_no) +
                               ": expected {\"id\", \"selected\"}");
    OracleLabel l;
    l.doc_id = obj["id"].get<std::string>();
    l.selected = obj["selected"].get<std::vector<int>>();
    by_id[l.doc_id] = std::move(l);
  }
  std::vector<OracleLabel> out;
  for (const Document& d : docs) {
    auto it = by_id.find(d.id);
    if (it == by_id.end())
      throw std::runtime_error("no label for document " + d.id);
    out.push_back(it->second);
  }
  return out;
}

std::vector<SystemOutput> load_outputs(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open outputs: " + path);
  std::vector<SystemOutput> outs;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
        !obj.contains("summary"))
      throw std::runtime_error("outputs line " + std::to_string(line_no) +
                               ": expected {\"id\", \"summary\"}");
    SystemOutput o;
    o.id = obj["id"].get<std::string>();
    o.summary = obj["summary"].get<std::vector<std::string>>();
    outs.push_back(std::move(o));
  }
  return outs;
}

std::vector<Sentence> read_sentence_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open text file: " + path);
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(make_sentence(line));
  }
  return out;
}

const char* method_name(OracleMethod m) {
  switch (m) {
    case OracleMethod::SENTENCE_MATCH: return "sentence_match";
    case OracleMethod::GREEDY: return "greedy";
    default: return "combination";
  }
}

SentenceRewriter make_rewriter(AbstractorModel<double>& abs, const Vocab& vocab,
                               int beam, int max_len) {
  return [&abs, vocab, beam, max_len](const std::vector<Sentence>& in) {
    std::vector<Sentence> out;
    out.reserve(in.size());
    for (const Sentence& s : in) {
      auto beams = decode(abs, vocab, s.tokens, beam, max_len);
      Sentence t;
      t.tokens = beams.front().words;
      for (size_t i = 0; i < t.tokens.size(); ++i) {
        if (i) t.raw += ' ';
        t.raw += t.tokens[i];
      }
      out.push_back(std::move(t));
    }
    return out;
  };
}

// ---- verbs -----------------------------------------------------------------

struct GenSynthArgs {
  Common common;
  SyntheticSpec spec;
};

void run_gen_synth(const GenSynthArgs& a) {
  RunConfig cfg = base_config(a.common);
  finalize_config(cfg, a.common);
  SyntheticSpec spec = a.spec;
  spec.seed = cfg.seed;
  spec.validate();
  auto corpus = gen_synthetic(spec);
  std::vector<DatasetRecord> records;
  auto meta = open_out(out_path(a.common, "synth_meta.jsonl"));
  for (const SyntheticDoc& sd : corpus) {
    records.push_back(sd.record);
    meta << json{{"id", sd.record.id},
                 {"optimal", sd.optimal},
                 {"trap", sd.trap}}
                .dump()
         << '\n';
  }
  write_jsonl(out_path(a.common, "corpus.jsonl"), records);
  json spec_json{{"n_docs", spec.n_docs},
                 {"vocab_size", spec.vocab_size},
                 {"ref_sentences", spec.ref_sentences},
                 {"distractors", spec.distractors},
                 {"near_duplicate_rate", spec.near_duplicate_rate},
                 {"noise_rate", spec.noise_rate},
                 {"seed", spec.seed}};
  open_out(out_path(a.common, "synth_spec.json")) << spec_json.dump(2) << '\n';
  std::cout << "wrote " << records.size() << " documents to "
            << out_path(a.common, "corpus.jsonl") << "\n";
}

struct OracleArgs {
  Common common;
  std::string input;
  std::string method = "greedy";
  int max_k = -1;
};

void run_oracle(const OracleArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.max_k > 0) cfg.max_k = a.max_k;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  auto os = open_out(out_path(a.common, "labels.jsonl"));
  for (const DatasetRecord& rec : records) {
    Document doc = to_document(rec);
    ReferenceSummary ref = to_reference(rec);
    OracleLabel label;
    if (a.method == "match") label = sentence_match_label(doc, ref);
    else if (a.method == "greedy") label = greedy_oracle(doc, ref, cfg.max_k);
    else label = combination_search(doc, ref, cfg.max_k);
    os << label_row(label).dump() << '\n';
  }
  std::cout << "wrote labels for " << records.size() << " documents to "
            << out_path(a.common, "labels.jsonl") << "\n";
}

struct OracleReportArgs {
  Common common;
  std::string input;
  std::string abstractor = "identity";
  int max_k = -1;
};

void run_oracle_report(const OracleReportArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.max_k > 0) cfg.max_k = a.max_k;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  auto docs = to_documents(records);
  auto refs = to_references(records);
  AbstractorModel<double> abs;
  Vocab abs_vocab;
  SentenceRewriter rewrite;  // identity when empty
  if (a.abstractor != "identity") {
    abs = load_abstractor_bundle(a.abstractor, abs_vocab);
    rewrite = make_rewriter(abs, abs_vocab, 1, cfg.max_decode_len);
  }
  auto rows = oracle_report(docs, refs,
                            {OracleMethod::SENTENCE_MATCH, OracleMethod::GREEDY,
                             OracleMethod::COMBINATION},
                            cfg.max_k, rewrite);
  json out = json::array();
  for (const OracleReportRow& row : rows) {
    out.push_back(json{{"method", method_name(row.method)},
                       {"r1", score_json(row.r1)},
                       {"r2", score_json(row.r2)},
                       {"rl", score_json(row.rl)},
                       {"mean_selected", row.mean_selected}});
    std::cout << method_name(row.method) << "  R-1 " << row.r1.f1 << "  R-2 "
              << row.r2.f1 << "  R-L " << row.rl.f1 << "  mean selected "
              << row.mean_selected << "\n";
  }
  open_out(out_path(a.common, "oracle_report.json")) << out.dump(2) << '\n';
}

struct PretrainArgs {
  Common common;
  std::string input;
  std::string labels;
  int epochs = -1;
};

void run_pretrain_ext(const PretrainArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.epochs >= 0) cfg.epochs = a.epochs;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  Vocab vocab = build_vocab(records, cfg.vocab_limit);
  auto docs = to_documents(records);
  auto refs = to_references(records);
  std::vector<OracleLabel> labels;
  if (!a.labels.empty()) {
    labels = load_labels_for(a.labels, docs);
  } else {
    for (size_t i = 0; i < docs.size(); ++i)
      labels.push_back(greedy_oracle(docs[i], refs[i], cfg.max_k));
  }
  ExtractorModel<double> model;
  model.build(vocab.size(), encoder_config(cfg));
  model.init_weights(cfg.seed);
  auto log = open_out(out_path(a.common, "pretrain_log.jsonl"));
  auto curve = pretrain_extractor<double>(
      model, vocab, docs, labels, cfg, cfg.epochs, cfg.seed,
      [&log](int epoch, double loss) {
        log << json{{"epoch", epoch}, {"loss", loss}}.dump() << '\n';
        log.flush();
      });
  save_extractor_bundle(model, vocab, out_path(a.common, "extractor"));
  std::cout << "pretrained extractor for " << curve.size()
            << " epochs, final loss "
            << (curve.empty() ? 0.0 : curve.back()) << "\n";
}

struct TrainAbsArgs {
  Common common;
  std::string input;
  int epochs = -1;
};

void run_train_abs(const TrainAbsArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.epochs >= 0) cfg.epochs = a.epochs;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  Vocab vocab = build_vocab(records, cfg.vocab_limit);
  std::vector<AbstractorPair> pairs;
  for (const DatasetRecord& rec : records) {
    Document doc = to_document(rec);
    ReferenceSummary ref = to_reference(rec);
    for (AbstractorPair& p : sentence_match(doc, ref))
      pairs.push_back(std::move(p));
  }
  AbstractorModel<double> abs;
  abs.build(vocab.size(), cfg.abs_embed_dim, cfg.hidden_dim);
  abs.init_weights(cfg.seed);
  AbstractorTrainOptions opts;
  opts.epochs = cfg.epochs;
  opts.lr = cfg.abs_lr;
  opts.clip = cfg.clip_norm;
  opts.seed = cfg.seed;
  auto curve = train_abstractor(abs, vocab, pairs, opts);
  auto log = open_out(out_path(a.common, "train_abs_log.jsonl"));
  for (size_t e = 0; e < curve.size(); ++e)
    log << json{{"epoch", e}, {"loss", curve[e]}}.dump() << '\n';
  save_abstractor_bundle(abs, vocab, out_path(a.common, "abstractor"));
  std::cout << "trained abstractor on " << pairs.size()
            << " pairs, final loss " << (curve.empty() ? 0.0 : curve.back())
            << "\n";
}

struct TrainRlArgs {
  Common common;
  std::string input;
  std::string actor_ckpt;
  std::string critic_ckpt;
  std::string reward = "summary";
  std::string abstractor = "identity";
  int epochs = -1;
  double gamma = -1.0;
  double stop_lambda = -1.0;
};

void run_train_rl(const TrainRlArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.epochs >= 0) cfg.epochs = a.epochs;
  if (a.gamma >= 0.0) cfg.gamma = a.gamma;
  if (a.stop_lambda >= 0.0) cfg.stop_lambda = a.stop_lambda;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  Vocab vocab;
  ExtractorModel<double> actor = load_extractor_bundle(a.actor_ckpt, vocab);
  CriticModel<double> critic =
      a.critic_ckpt.empty() ? CriticModel<double>::make(actor, cfg.seed)
                            : load_critic_bundle(a.critic_ckpt);
  auto docs = to_documents(records);
  auto refs = to_references(records);
  RewardMode mode = a.reward == "sentence" ? RewardMode::SENTENCE_LEVEL
                                           : RewardMode::SUMMARY_LEVEL;
  RLConfig rl = rl_config(cfg, mode);
  AbstractorModel<double> abs;
  Vocab abs_vocab;
  SentenceRewriter rewrite;
  if (a.abstractor != "identity") {
    abs = load_abstractor_bundle(a.abstractor, abs_vocab);
    rewrite = make_rewriter(abs, abs_vocab, 1, cfg.max_decode_len);
  }
  auto log = open_out(out_path(a.common, "rl_log.jsonl"));
  a2c_finetune<double>(actor, critic, docs, refs, vocab, rl, cfg.max_k,
                       cfg.epochs, cfg.seed, rewrite,
                       [&log](int epoch, const RLEpochStats& st) {
                         log << json{{"epoch", epoch},
                                     {"mean_return", st.mean_return},
                                     {"mean_len", st.mean_len},
                                     {"stop_rate", st.stop_rate}}
                                    .dump()
                             << '\n';
                         log.flush();
                       });
  save_extractor_bundle(actor, vocab, out_path(a.common, "actor_rl"));
  save_critic_bundle(critic, out_path(a.common, "critic"));
  RLEpochStats after = evaluate_policy(actor, docs, refs, vocab, cfg.max_k, rewrite);
  std::cout << "finetuned actor for " << cfg.epochs
            << " epochs, greedy mean return " << after.mean_return << "\n";
}

struct ExtractArgs {
  Common common;
  std::string input;
  std::string actor_ckpt;
  int max_k = -1;
  bool trigram_block = false;
};

void run_extract(const ExtractArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.max_k > 0) cfg.max_k = a.max_k;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  Vocab vocab;
  ExtractorModel<double> actor = load_extractor_bundle(a.actor_ckpt, vocab);
  EpisodeOptions eo;
  eo.mode = SelectMode::GREEDY;
  eo.max_k = cfg.max_k;
  eo.trigram_block = a.trigram_block;
  auto os = open_out(out_path(a.common, "selections.jsonl"));
  for (const DatasetRecord& rec : records) {
    ExtractionResult res = run_episode(actor, vocab, to_document(rec), eo, 0);
    os << json{{"id", rec.id}, {"selected", res.selected}}.dump() << '\n';
  }
  std::cout << "wrote selections for " << records.size() << " documents to "
            << out_path(a.common, "selections.jsonl") << "\n";
}

struct AbstractArgs {
  Common common;
  std::string input;
  std::string abstractor;
  std::string selections;
  int beam = -1;
  bool rerank = false;
};

void run_abstract(const AbstractArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.beam > 0) cfg.beam_width = a.beam;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  Vocab vocab;
  AbstractorModel<double> abs = load_abstractor_bundle(a.abstractor, vocab);
  std::map<std::string, std::vector<int>> selected;
  if (!a.selections.empty()) {
    std::ifstream is(a.selections);
    if (!is) throw std::runtime_error("cannot open selections: " + a.selections);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json obj = json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
          !obj.contains("selected"))
        throw std::runtime_error("selections line " + std::to_string(line_no) +
                                 ": expected {\"id\", \"selected\"}");
      selected[obj["id"].get<std::string>()] =
          obj["selected"].get<std::vector<int>>();
    }
  }
  auto os = open_out(out_path(a.common, "outputs.jsonl"));
  for (const DatasetRecord& rec : records) {
    Document doc = to_document(rec);
    std::vector<int> indices;
    if (auto it = selected.find(rec.id); it != selected.end()) {
      indices = it->second;
    } else if (a.selections.empty()) {
      for (size_t i = 0; i < doc.sentences.size(); ++i)
        indices.push_back(static_cast<int>(i));
    } else {
      throw std::runtime_error("no selection for document " + rec.id);
    }
    std::vector<std::vector<BeamHypothesis>> beams;
    for (int idx : indices) {
      if (idx < 0 || idx >= static_cast<int>(doc.sentences.size()))
        throw std::runtime_error("selection index out of range for document " +
                                 rec.id);
      beams.push_back(decode(abs, vocab, doc.sentences[idx].tokens,
                             cfg.beam_width, cfg.max_decode_len));
    }
    std::vector<BeamHypothesis> picked;
    if (a.rerank && !beams.empty()) picked = rerank(beams);
    else
      for (const auto& b : beams) picked.push_back(b.front());
    std::vector<std::string> summary;
    for (const BeamHypothesis& hyp : picked) {
      std::string raw;
      for (size_t i = 0; i < hyp.words.size(); ++i) {
        if (i) raw += ' ';
        raw += hyp.words[i];
      }
      summary.push_back(std::move(raw));
    }
    os << json{{"id", rec.id}, {"summary", summary}}.dump() << '\n';
  }
  std::cout << "wrote summaries for " << records.size() << " documents to "
            << out_path(a.common, "outputs.jsonl") << "\n";
}

struct SummarizeArgs {
  Common common;
  std::string input;
  std::string actor_ckpt;
  std::string abstractor = "identity";
  bool rerank = false;
  bool trigram_block = false;
  int beam = -1;
  int max_k = -1;
};

void run_summarize(const SummarizeArgs& a) {
  RunConfig cfg = base_config(a.common);
  if (a.beam > 0) cfg.beam_width = a.beam;
  if (a.max_k > 0) cfg.max_k = a.max_k;
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  Vocab vocab;
  ExtractorModel<double> actor = load_extractor_bundle(a.actor_ckpt, vocab);
  AbstractorModel<double> abs;
  Vocab abs_vocab;
  bool use_abs = a.abstractor != "identity";
  if (use_abs) abs = load_abstractor_bundle(a.abstractor, abs_vocab);
  SummarizeOptions opts;
  opts.max_k = cfg.max_k;
  opts.rerank = a.rerank;
  opts.beam_width = cfg.beam_width;
  opts.max_decode_len = cfg.max_decode_len;
  opts.trigram_block = a.trigram_block;
  auto os = open_out(out_path(a.common, "outputs.jsonl"));
  for (const DatasetRecord& rec : records) {
    Document doc = to_document(rec);
    // the abstractor bundle carries its own vocabulary; extraction uses the
    // actor's
    std::vector<Sentence> summary;
    if (use_abs) {
      EpisodeOptions eo;
      eo.mode = SelectMode::GREEDY;
      eo.max_k = opts.max_k;
      eo.trigram_block = opts.trigram_block;
      ExtractionResult ext = run_episode(actor, vocab, doc, eo, 0);
      std::vector<std::vector<BeamHypothesis>> beams;
      int beam_k = opts.rerank ? opts.beam_width : 1;
      for (int idx : ext.selected)
        beams.push_back(decode(abs, abs_vocab, doc.sentences[idx].tokens,
                               beam_k, opts.max_decode_len));
      std::vector<BeamHypothesis> picked;
      if (opts.rerank) picked = rerank(beams);
      else
        for (const auto& b : beams) picked.push_back(b.front());
      for (const BeamHypothesis& hyp : picked) {
        Sentence s;
        s.tokens = hyp.words;
        for (size_t i = 0; i < hyp.words.size(); ++i) {
          if (i) s.raw += ' ';
          s.raw += hyp.words[i];
        }
        summary.push_back(std::move(s));
      }
    } else {
      summary = summarize_doc<double>(actor, nullptr, vocab, doc, opts);
    }
    std::vector<std::string> raws;
    for (const Sentence& s : summary) raws.push_back(s.raw);
    os << json{{"id", rec.id}, {"summary", raws}}.dump() << '\n';
  }
  std::cout << "wrote summaries for " << records.size() << " documents to "
            << out_path(a.common, "outputs.jsonl") << "\n";
}

struct EvaluateArgs {
  Common common;
  std::string input;
  std::string outputs;
  std::string mode = "full";
};

void run_evaluate(const EvaluateArgs& a) {
  RunConfig cfg = base_config(a.common);
  finalize_config(cfg, a.common);
  auto records = load_corpus(a.input);
  auto outs = load_outputs(a.outputs);
  EvalMode mode =
      a.mode == "limited" ? EvalMode::LIMITED_RECALL : EvalMode::FULL_F1;
  EvalReport rep = evaluate_summaries(records, outs, mode);
  json obj{{"mode", a.mode == "limited" ? "limited_recall" : "full_f1"},
           {"documents", rep.documents},
           {"r1", score_json(rep.r1)},
           {"r2", score_json(rep.r2)},
           {"rl", score_json(rep.rl)},
           {"r_avg", rep.r_avg}};
  open_out(out_path(a.common, "metrics.json")) << obj.dump(2) << '\n';
  if (mode == EvalMode::FULL_F1)
    std::cout << "R-1 " << rep.r1.f1 << "  R-2 " << rep.r2.f1 << "  R-L "
              << rep.rl.f1 << "  R-AVG " << rep.r_avg << "\n";
  else
    std::cout << "R-1 " << rep.r1.recall << "  R-2 " << rep.r2.recall
              << "  R-L " << rep.rl.recall << "  R-AVG " << rep.r_avg << "\n";
}

struct RougeArgs {
  Common common;
  std::string cand;
  std::string ref;
  bool stem = false;
};

void run_rouge(const RougeArgs& a) {
  RunConfig cfg = base_config(a.common);
  finalize_config(cfg, a.common);
  std::vector<Sentence> cand = read_sentence_file(a.cand);
  std::vector<Sentence> ref = read_sentence_file(a.ref);
  if (a.stem) {
    for (Sentence& s : cand)
      for (Token& t : s.tokens) t = porter_stem(t);
    for (Sentence& s : ref)
      for (Token& t : s.tokens) t = porter_stem(t);
  }
  std::vector<Token> cand_stream, ref_stream;
  for (const Sentence& s : cand)
    cand_stream.insert(cand_stream.end(), s.tokens.begin(), s.tokens.end());
  for (const Sentence& s : ref)
    ref_stream.insert(ref_stream.end(), s.tokens.begin(), s.tokens.end());
  RougeScore r1 = rouge_n(cand_stream, ref_stream, 1);
  RougeScore r2 = rouge_n(cand_stream, ref_stream, 2);
  RougeScore rl = rouge_l_summary(cand, ref);
  json obj{{"r1", score_json(r1)},
           {"r2", score_json(r2)},
           {"rl_summary", score_json(rl)}};
  open_out(out_path(a.common, "rouge.json")) << obj.dump(2) << '\n';
  std::cout << "R-1 " << r1.f1 << "  R-2 " << r2.f1 << "  R-L " << rl.f1
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extract-then-rewrite neural summarization toolkit"};
  app.require_subcommand(1);

  GenSynthArgs gs;
  CLI::App* gen = app.add_subcommand("gen-synth", "generate a synthetic corpus");
  add_common(gen, gs.common);
  gen->add_option("--docs", gs.spec.n_docs, "number of documents");
  gen->add_option("--vocab", gs.spec.vocab_size, "token pool size");
  gen->add_option("--refs", gs.spec.ref_sentences,
                  "max reference sentences per document");
  gen->add_option("--distractors", gs.spec.distractors,
                  "max distractor sentences per document");
  gen->add_option("--dup-rate", gs.spec.near_duplicate_rate,
                  "probability of a redundancy trap document");
  gen->add_option("--noise-rate", gs.spec.noise_rate,
                  "per-token drop/swap probability");
  gen->callback([&gs] { run_gen_synth(gs); });

  OracleArgs oa;
  CLI::App* orc = app.add_subcommand("oracle", "label a corpus with an oracle");
  add_common(orc, oa.common);
  orc->add_option("--input", oa.input, "corpus JSONL")->required();
  orc->add_option("--method", oa.method, "match | greedy | combo")
      ->check(CLI::IsMember({"match", "greedy", "combo"}));
  orc->add_option("--max-k", oa.max_k, "selection budget");
  orc->callback([&oa] { run_oracle(oa); });

  OracleReportArgs ora;
  CLI::App* orp =
      app.add_subcommand("oracle-report", "compare oracle methods on a corpus");
  add_common(orp, ora.common);
  orp->add_option("--input", ora.input, "corpus JSONL")->required();
  orp->add_option("--max-k", ora.max_k, "selection budget");
  orp->add_option("--abstractor", ora.abstractor,
                  "abstractor bundle prefix or 'identity'");
  orp->callback([&ora] { run_oracle_report(ora); });

  PretrainArgs pa;
  CLI::App* pre = app.add_subcommand(
      "pretrain-ext", "cross-entropy pre-training of the extractor");
  add_common(pre, pa.common);
  pre->add_option("--input", pa.input, "corpus JSONL")->required();
  pre->add_option("--labels", pa.labels,
                  "oracle labels JSONL (greedy labels computed when omitted)");
  pre->add_option("--epochs", pa.epochs, "training epochs");
  pre->callback([&pa] { run_pretrain_ext(pa); });

  TrainAbsArgs ta;
  CLI::App* tab =
      app.add_subcommand("train-abs", "train the sentence rewriter");
  add_common(tab, ta.common);
  tab->add_option("--input", ta.input, "corpus JSONL")->required();
  tab->add_option("--epochs", ta.epochs, "training epochs");
  tab->callback([&ta] { run_train_abs(ta); });

  TrainRlArgs tr;
  CLI::App* trl = app.add_subcommand(
      "train-rl", "advantage actor-critic fine-tuning of the extractor");
  add_common(trl, tr.common);
  trl->add_option("--input", tr.input, "corpus JSONL")->required();
  trl->add_option("--actor-ckpt", tr.actor_ckpt, "extractor bundle prefix")
      ->required();
  trl->add_option("--critic-ckpt", tr.critic_ckpt,
                  "critic bundle prefix (cloned from the actor when omitted)");
  trl->add_option("--reward", tr.reward, "summary | sentence")
      ->check(CLI::IsMember({"summary", "sentence"}));
  trl->add_option("--abstractor", tr.abstractor,
                  "abstractor bundle prefix or 'identity'");
  trl->add_option("--epochs", tr.epochs, "training epochs");
  trl->add_option("--gamma", tr.gamma, "discount factor override");
  trl->add_option("--stop-lambda", tr.stop_lambda, "stop bonus weight override");
  trl->callback([&tr] { run_train_rl(tr); });

  ExtractArgs ea;
  CLI::App* ext = app.add_subcommand("extract", "greedy sentence extraction");
  add_common(ext, ea.common);
  ext->add_option("--input", ea.input, "corpus JSONL")->required();
  ext->add_option("--actor-ckpt", ea.actor_ckpt, "extractor bundle prefix")
      ->required();
  ext->add_option("--max-k", ea.max_k, "selection budget");
  ext->add_flag("--trigram-block", ea.trigram_block,
                "block selections repeating a trigram");
  ext->callback([&ea] { run_extract(ea); });

  AbstractArgs aa;
  CLI::App* abs = app.add_subcommand("abstract", "rewrite selected sentences");
  add_common(abs, aa.common);
  abs->add_option("--input", aa.input, "corpus JSONL")->required();
  abs->add_option("--abstractor", aa.abstractor, "abstractor bundle prefix")
      ->required();
  abs->add_option("--selections", aa.selections,
                  "selections JSONL (all sentences when omitted)");
  abs->add_option("--beam", aa.beam, "beam width");
  abs->add_flag("--rerank", aa.rerank, "cross-sentence beam rerank");
  abs->callback([&aa] { run_abstract(aa); });

  SummarizeArgs sa;
  CLI::App* sum =
      app.add_subcommand("summarize", "extract then rewrite end to end");
  add_common(sum, sa.common);
  sum->add_option("--input", sa.input, "corpus JSONL")->required();
  sum->add_option("--actor-ckpt", sa.actor_ckpt, "extractor bundle prefix")
      ->required();
  sum->add_option("--abstractor", sa.abstractor,
                  "abstractor bundle prefix or 'identity'");
  sum->add_flag("--rerank", sa.rerank, "cross-sentence beam rerank");
  sum->add_flag("--trigram-block", sa.trigram_block,
                "block selections repeating a trigram");
  sum->add_option("--beam", sa.beam, "beam width");
  sum->add_option("--max-k", sa.max_k, "selection budget");
  sum->callback([&sa] { run_summarize(sa); });

  EvaluateArgs ev;
  CLI::App* evl = app.add_subcommand("evaluate", "score system summaries");
  add_common(evl, ev.common);
  evl->add_option("--input", ev.input, "corpus JSONL")->required();
  evl->add_option("--outputs", ev.outputs, "system outputs JSONL")->required();
  evl->add_option("--mode", ev.mode, "full | limited")
      ->check(CLI::IsMember({"full", "limited"}));
  evl->callback([&ev] { run_evaluate(ev); });

  RougeArgs ra;
  CLI::App* rg = app.add_subcommand("rouge", "score two sentence files");
  add_common(rg, ra.common);
  rg->add_option("--cand", ra.cand, "candidate text, one sentence per line")
      ->required();
  rg->add_option("--ref", ra.ref, "reference text, one sentence per line")
      ->required();
  rg->add_flag("--stem", ra.stem, "stem tokens before scoring");
  rg->callback([&ra] { run_rouge(ra); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
