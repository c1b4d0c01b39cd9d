#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "msim/cluster.hpp"
#include "msim/dataset.hpp"
#include "msim/manifest.hpp"
#include "msim/metrics.hpp"
#include "msim/record.hpp"
#include "msim/svm.hpp"

namespace msim {

// ---------------------------------------------------------------------------
// artifact files
//
// Artifacts are JSON documents with the manifest embedded under "manifest".
// Run logs use a columnar layout (schema 1): one array per record field,
// actions and sides encoded as small integers, with the order id column
// trailing; top-of-book quotes ride along as a sidecar block.  Reports are
// tab-delimited text with a header row; their first line is a comment naming
// the manifest hash and every input hash.

void write_json_file(const std::filesystem::path& path, const Json& j);
// throws a descriptive error naming the path when missing or unparsable
Json read_json_file(const std::filesystem::path& path);

Manifest manifest_of(const Json& artifact);  // from the "manifest" field

// run logs --------------------------------------------------------------
Json log_to_json(const RunLog& log, const Manifest& manifest);
RunLog log_from_json(const Json& j);

// datasets ----------------------------------------------------------------
Json dataset_to_json(const Dataset& ds, const Manifest& manifest);
Dataset dataset_from_json(const Json& j);

Json split_to_json(const SplitIndices& split, const Manifest& manifest);
SplitIndices split_from_json(const Json& j);

Json scaler_to_json(const Scaler& scaler);
Scaler scaler_from_json(const Json& j);

// models --------------------------------------------------------------
Json svm_to_json(const OvoSvm& model, const Manifest& manifest);
OvoSvm svm_from_json(const Json& j);

Json dendrogram_to_json(const Dendrogram& tree, const Manifest& manifest);
Dendrogram dendrogram_from_json(const Json& j);

// report text ---------------------------------------------------------------
// tab-delimited classification table: per-class precision/recall/F1/support
// rows plus an overall accuracy line
std::string classification_report_text(const ClassificationReport& report,
                                       const Manifest& manifest);
// tab-delimited cluster table: one row per reporting group
std::string cluster_report_text(const ClusterEvaluation& ev, int k,
                                const Manifest& manifest);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace msim
