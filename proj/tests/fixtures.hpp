#pragma once

#include "tfnorm/corpus.hpp"

#include <string>
#include <vector>

namespace fixtures {

inline const char* kD1 = "Language modeling approach";
inline const char* kD2 = "Language modeling approach Language modeling approach";
inline const char* kD3 = "Information retrieval model\nLanguage modeling approach";
inline const char* kQuery = "language modeling approach";

// The three sample documents keep six distinct terms only without stemming
// (Porter folds "modeling" into "model").
inline tfnorm::TextPipeline unstemmed() {
    tfnorm::TextPipeline p;
    p.stemming = false;
    return p;
}

inline std::vector<tfnorm::RawDocument> sample_corpus() {
    return {{"D1", kD1}, {"D2", kD2}, {"D3", kD3}};
}

inline tfnorm::Document doc(const std::string& id, tfnorm::TermCounts tf) {
    return tfnorm::Document::from_counts(id, std::move(tf));
}

} // namespace fixtures
