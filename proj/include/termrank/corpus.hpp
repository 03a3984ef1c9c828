#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "termrank/common.hpp"

namespace termrank {

/// One normalized token plus the byte range it came from, so the original
/// surface form is recoverable from Document::text.
struct Token {
    std::string text;   // lowercased
    std::size_t begin;  // byte offset into the source text
    std::size_t end;    // exclusive
};

/// A tokenized text unit with identity.
struct Document {
    std::string doc_id;
    std::string text;
    std::vector<Token> tokens;

    static Document from_text(std::string doc_id, std::string text);
};

struct Corpus {
    std::vector<Document> documents;

    std::size_t size() const { return documents.size(); }
};

/// A known term: normalized token sequence, optional familiarity in [0,1],
/// semantic type labels, and a flag marking membership in the
/// patient-vocabulary resource.
struct LexiconEntry {
    std::vector<std::string> term_tokens;
    std::optional<double> familiarity;
    std::vector<std::string> semantic_types;
    bool vocab_member = false;

    bool has_type(const std::string& label) const;
};

/// Lexicon with a token-level trie for greedy longest-match lookup.
class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::vector<LexiconEntry> entries);

    const std::vector<LexiconEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Longest entry whose tokens match tokens[pos..) exactly.
    /// Returns (match length, entry index) or nullopt.
    std::optional<std::pair<std::size_t, std::uint32_t>> longest_match(
        std::span<const Token> tokens, std::size_t pos) const;

    /// Exact lookup by normalized token sequence.
    std::optional<std::uint32_t> find(const std::vector<std::string>& term_tokens) const;

private:
    struct TrieNode {
        std::map<std::string, std::uint32_t> children;  // token -> node index
        std::optional<std::uint32_t> entry;             // set on terminal nodes
    };

    std::vector<LexiconEntry> entries_;
    std::vector<TrieNode> nodes_;  // nodes_[0] is the root
};

/// A token-index range [begin, end) within a host document.
struct TokenSpan {
    std::size_t begin;
    std::size_t end;

    friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

/// All occurrences of one distinct surface form within one document.
struct CandidateTerm {
    std::string term_id;  // space-joined surface tokens, unique per document
    std::vector<std::string> surface_tokens;
    std::vector<TokenSpan> occurrences;        // sorted by begin
    std::optional<std::uint32_t> lexicon_index;  // into the Lexicon it was matched against

    std::size_t tf() const { return occurrences.size(); }
    std::size_t first_position() const { return occurrences.front().begin; }
};

/// Splits text into lowercased maximal runs of alphanumeric characters;
/// hyphens and apostrophes are kept only between such characters. Bytes
/// >= 0x80 are treated as word characters and passed through untouched.
std::vector<Token> tokenize(std::string_view text);

/// Convenience: token strings only.
std::vector<std::string> tokenize_words(std::string_view text);

/// Space-joins a token sequence into the canonical term identifier.
std::string join_tokens(std::span<const std::string> tokens);

/// Loads a corpus from JSONL ({"doc_id":..., "text":...} per line).
/// Duplicate doc_ids are rejected.
Corpus load_corpus(const std::filesystem::path& path);

/// Loads a lexicon from 4-column TSV: term, familiarity (may be empty),
/// semicolon-separated semantic types (may be empty), vocab_member (0/1).
/// Lines starting with '#' are comments. Duplicate terms (after
/// normalization) are rejected.
Lexicon load_lexicon(const std::filesystem::path& path);

/// Greedy longest-match left-to-right scan of doc.tokens against the
/// lexicon. After a match of length L at position i the scan resumes at
/// i+L. Occurrences of the same surface form are aggregated into one
/// CandidateTerm; the result is ordered by first occurrence.
std::vector<CandidateTerm> extract_candidates(const Document& doc, const Lexicon& lexicon);

/// Reads pre-extracted candidates from JSONL
/// ({"term":..., "spans":[[begin,end),...]} per line), validating that each
/// span's document tokens equal the tokenized term. Aggregates by surface
/// form and orders by first occurrence.
std::vector<CandidateTerm> import_candidates(const Document& doc,
                                             const std::filesystem::path& path);

/// Serializes candidates to the JSONL format accepted by import_candidates.
std::string candidates_to_jsonl(const std::vector<CandidateTerm>& candidates);

/// Attaches lexicon_index to candidates whose surface tokens exactly match
/// a lexicon entry. Used after import_candidates so lexicon-based views can
/// see familiarity and semantic types.
void link_candidates(std::vector<CandidateTerm>& candidates, const Lexicon& lexicon);

}  // namespace termrank
