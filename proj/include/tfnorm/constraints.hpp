#pragma once

#include "tfnorm/corpus.hpp"
#include "tfnorm/scorers.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tfnorm {

/// VNC: a K-verbose copy of a document must score the same.
/// TNC: an N-topical extension of a document must score the same.
enum class Constraint { VNC, TNC };

std::string_view to_string(Constraint c);

/// Multiplies every count by k (k >= 1). Vocabulary and information
/// quantity are unchanged.
Document make_k_verbose(const Document& doc, Count k);

/// Keeps every count of a uniform-tf document and adds each filler term with
/// that same count, giving n times the length, vocabulary and information
/// quantity. Requires exactly (n - 1) * vocab_size fillers, none of which
/// occur in the document. Throws on a non-uniform document.
Document make_n_topical(const Document& doc, Count n, const std::vector<std::string>& fillers);

struct ConstraintInstance {
    std::shared_ptr<const CollectionStats> stats;  // held fixed across the transform
    std::string corpus;                            // provenance label
    Document doc;
    Query query;
    Count factor = 1;                  // K for VNC, N for TNC
    std::vector<std::string> fillers;  // TNC only

    Document transformed(Constraint c) const;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    std::size_t corpora = 20;
    std::size_t instances_per_corpus = 50;
    std::size_t max_docs = 50;
    std::size_t max_terms = 200;
};

/// Seeded synthetic instances plus the fixed three-document introduction
/// example. TNC instances only use documents with uniform term counts.
std::vector<ConstraintInstance> generate_instances(Constraint c, const SuiteOptions& opts = {});

enum class Verdict { Satisfied, Violated };

struct Witness {
    std::string corpus;
    std::string doc_id;
    std::string query;  // space-separated terms
    Count factor = 1;
    std::string params;
    double original = 0.0;
    double transformed = 0.0;
    double residual = 0.0;
};

struct ConstraintReport {
    std::string scorer;
    Constraint constraint = Constraint::VNC;
    std::size_t instances = 0;  // instance x parameter-setting evaluations
    double max_residual = 0.0;
    Verdict verdict = Verdict::Satisfied;
    std::optional<Witness> witness;  // always set for violated reports
};

constexpr double kConstraintTolerance = 1e-9;
/// A violation only counts as a counterexample above this residual.
constexpr double kViolationThreshold = 1e-6;

/// Max |score(D) - score(transform(D))| over every instance under every
/// setting (all settings must share one method).
ConstraintReport check_constraint(const std::vector<SmoothingConfig>& settings, Constraint c,
                                  const std::vector<ConstraintInstance>& instances,
                                  double tolerance = kConstraintTolerance);

enum class Expectation { Satisfied, Violated, ReportOnly };

/// The verdict each scorer should reach under the information-quantity measure.
Expectation expected_verdict(Method m, Constraint c);

/// Parameter grid used by the axiom harness for one method.
std::vector<SmoothingConfig> axiom_settings(Method m, TopicMeasure kind = TopicMeasure::InformationQuantity);

struct AxiomCheck {
    ConstraintReport report;
    Expectation expected = Expectation::ReportOnly;
    bool holds = true;
};

struct AxiomReport {
    std::uint64_t seed = 0;
    std::vector<AxiomCheck> checks;  // method-major, VNC before TNC
    bool matrix_holds() const;
};

AxiomReport run_axiom_suite(const SuiteOptions& opts = {}, unsigned workers = 1);

void write_table(std::ostream& out, const AxiomReport& report);
void write_json(std::ostream& out, const AxiomReport& report);

} // namespace tfnorm
