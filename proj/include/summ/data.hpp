#pragma once

#include <string>
#include <vector>

#include "summ/types.hpp"

namespace summ {

/// One corpus entry: an article split into sentence strings plus its
/// reference summary, also split into sentence strings.
struct DatasetRecord {
  std::string id;
  std::vector<std::string> article;
  std::vector<std::string> abstract;
};

struct IngestResult {
  std::vector<DatasetRecord> records;
  int rejected = 0;  // structurally valid lines dropped for empty content
};

/// Reads a JSONL corpus, one object per line with fields "id" (string),
/// "article" and "abstract" (arrays of strings). Malformed lines raise with
/// the 1-based line number; records whose article or abstract is empty (or
/// whose every sentence normalizes to zero tokens) are counted in `rejected`
/// and skipped. An ingest that yields zero records is an error.
IngestResult ingest_jsonl(const std::string& path);

/// Writes records one JSON object per line. ingest_jsonl(write_jsonl(x))
/// reproduces x exactly.
void write_jsonl(const std::string& path,
                 const std::vector<DatasetRecord>& records);

Document to_document(const DatasetRecord& rec, bool stem = false);
ReferenceSummary to_reference(const DatasetRecord& rec, bool stem = false);

std::vector<Document> to_documents(const std::vector<DatasetRecord>& recs,
                                   bool stem = false);
std::vector<ReferenceSummary> to_references(
    const std::vector<DatasetRecord>& recs, bool stem = false);

}  // namespace summ
