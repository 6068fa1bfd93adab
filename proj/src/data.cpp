#include "summ/data.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "summ/textproc.hpp"

namespace summ {

namespace {

using nlohmann::json;

std::string line_err(int line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

std::vector<std::string> string_array(const json& obj, const char* field,
                                      int line_no) {
  if (!obj.contains(field))
    throw std::runtime_error(
        line_err(line_no, std::string("missing field '") + field + "'"));
  const json& arr = obj.at(field);
  if (!arr.is_array())
    throw std::runtime_error(line_err(
        line_no, std::string("field '") + field + "' must be an array"));
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const json& item : arr) {
    if (!item.is_string())
      throw std::runtime_error(line_err(
          line_no,
          std::string("field '") + field + "' must contain only strings"));
    out.push_back(item.get<std::string>());
  }
  return out;
}

bool all_sentences_empty(const std::vector<std::string>& sents) {
  for (const std::string& s : sents)
    if (!normalize_tokens(s).empty()) return false;
  return true;
}

}  // namespace

IngestResult ingest_jsonl(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open dataset: " + path);
  IngestResult result;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded())
      throw std::runtime_error(line_err(line_no, "invalid JSON"));
    if (!obj.is_object())
      throw std::runtime_error(line_err(line_no, "expected a JSON object"));
    if (!obj.contains("id"))
      throw std::runtime_error(line_err(line_no, "missing field 'id'"));
    if (!obj.at("id").is_string())
      throw std::runtime_error(line_err(line_no, "field 'id' must be a string"));
    DatasetRecord rec;
    rec.id = obj.at("id").get<std::string>();
    rec.article = string_array(obj, "article", line_no);
    rec.abstract = string_array(obj, "abstract", line_no);
    if (!seen_ids.insert(rec.id).second)
      throw std::runtime_error(line_err(line_no, "duplicate id '" + rec.id + "'"));
    if (rec.article.empty() || rec.abstract.empty() ||
        all_sentences_empty(rec.article) || all_sentences_empty(rec.abstract)) {
      ++result.rejected;
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (result.records.empty())
    throw std::runtime_error("empty corpus: " + path);
  return result;
}

void write_jsonl(const std::string& path,
                 const std::vector<DatasetRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open dataset for write: " + path);
  for (const DatasetRecord& rec : records) {
    json obj;
    obj["id"] = rec.id;
    obj["article"] = rec.article;
    obj["abstract"] = rec.abstract;
    os << obj.dump() << '\n';
  }
  if (!os) throw std::runtime_error("dataset write failed: " + path);
}

Document to_document(const DatasetRecord& rec, bool stem) {
  Document doc;
  doc.id = rec.id;
  doc.sentences.reserve(rec.article.size());
  for (const std::string& s : rec.article)
    doc.sentences.push_back(make_sentence(s, stem));
  return doc;
}

ReferenceSummary to_reference(const DatasetRecord& rec, bool stem) {
  ReferenceSummary ref;
  ref.reserve(rec.abstract.size());
  for (const std::string& s : rec.abstract)
    ref.push_back(make_sentence(s, stem));
  return ref;
}

std::vector<Document> to_documents(const std::vector<DatasetRecord>& recs,
                                   bool stem) {
  std::vector<Document> docs;
  docs.reserve(recs.size());
  for (const DatasetRecord& r : recs) docs.push_back(to_document(r, stem));
  return docs;
}

std::vector<ReferenceSummary> to_references(
    const std::vector<DatasetRecord>& recs, bool stem) {
  std::vector<ReferenceSummary> refs;
  refs.reserve(recs.size());
  for (const DatasetRecord& r : recs) refs.push_back(to_reference(r, stem));
  return refs;
}

}  // namespace summ
