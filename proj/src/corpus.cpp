#include "termrank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace termrank {

using nlohmann::json;

namespace {

bool is_word_char(unsigned char c) {
    // Bytes >= 0x80 (UTF-8 continuation/lead) count as word characters.
    return std::isalnum(c) != 0 || c >= 0x80;
}

char lower_ascii(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(line.substr(start));
            break;
        }
        parts.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

// Lines of a text file with 1-based numbering; strips trailing '\r'.
std::vector<std::string> read_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        if (!is_word_char(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        std::string word;
        while (i < n) {
            unsigned char c = static_cast<unsigned char>(text[i]);
            if (is_word_char(c)) {
                word.push_back(lower_ascii(c));
                ++i;
            } else if ((c == '-' || c == '\'') && i + 1 < n &&
                       is_word_char(static_cast<unsigned char>(text[i + 1]))) {
                // hyphen/apostrophe kept only between word characters
                word.push_back(static_cast<char>(c));
                ++i;
            } else {
                break;
            }
        }
        tokens.push_back(Token{std::move(word), begin, i});
    }
    return tokens;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> words;
    for (auto& token : tokenize(text)) {
        words.push_back(std::move(token.text));
    }
    return words;
}

std::string join_tokens(std::span<const std::string> tokens) {
    std::string joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            joined.push_back(' ');
        }
        joined += tokens[i];
    }
    return joined;
}

Document Document::from_text(std::string doc_id, std::string text) {
    Document doc;
    doc.doc_id = std::move(doc_id);
    doc.text = std::move(text);
    doc.tokens = tokenize(doc.text);
    return doc;
}

bool LexiconEntry::has_type(const std::string& label) const {
    return std::find(semantic_types.begin(), semantic_types.end(), label) != semantic_types.end();
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
    nodes_.emplace_back();  // root
    for (std::uint32_t idx = 0; idx < entries_.size(); ++idx) {
        const LexiconEntry& entry = entries_[idx];
        if (entry.term_tokens.empty()) {
            throw ValidationError("lexicon entry with empty token sequence");
        }
        std::uint32_t node = 0;
        for (const std::string& token : entry.term_tokens) {
            auto it = nodes_[node].children.find(token);
            if (it == nodes_[node].children.end()) {
                std::uint32_t next = static_cast<std::uint32_t>(nodes_.size());
                nodes_[node].children.emplace(token, next);
                nodes_.emplace_back();
                node = next;
            } else {
                node = it->second;
            }
        }
        if (nodes_[node].entry.has_value()) {
            throw ValidationError("duplicate lexicon term: " + join_tokens(entry.term_tokens));
        }
        nodes_[node].entry = idx;
    }
}

std::optional<std::pair<std::size_t, std::uint32_t>> Lexicon::longest_match(
    std::span<const Token> tokens, std::size_t pos) const {
    if (nodes_.empty()) {
        return std::nullopt;
    }
    std::optional<std::pair<std::size_t, std::uint32_t>> best;
    std::uint32_t node = 0;
    for (std::size_t i = pos; i < tokens.size(); ++i) {
        auto it = nodes_[node].children.find(tokens[i].text);
        if (it == nodes_[node].children.end()) {
            break;
        }
        node = it->second;
        if (nodes_[node].entry.has_value()) {
            best = {i - pos + 1, *nodes_[node].entry};
        }
    }
    return best;
}

std::optional<std::uint32_t> Lexicon::find(const std::vector<std::string>& term_tokens) const {
    if (nodes_.empty()) {
        return std::nullopt;
    }
    std::uint32_t node = 0;
    for (const std::string& token : term_tokens) {
        auto it = nodes_[node].children.find(token);
        if (it == nodes_[node].children.end()) {
            return std::nullopt;
        }
        node = it->second;
    }
    return nodes_[node].entry;
}

Corpus load_corpus(const std::filesystem::path& path) {
    Corpus corpus;
    auto lines = read_lines(read_file(path));
    std::unordered_set<std::string> seen_ids;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) {
            continue;
        }
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
        if (!record.is_object() || !record.contains("doc_id") || !record.contains("text")) {
            throw ParseError(path.string() + ":" + std::to_string(i + 1) +
                             ": expected {\"doc_id\", \"text\"}");
        }
        std::string doc_id = record.at("doc_id").get<std::string>();
        if (!seen_ids.insert(doc_id).second) {
            throw ValidationError(path.string() + ":" + std::to_string(i + 1) +
                                  ": duplicate doc_id " + doc_id);
        }
        corpus.documents.push_back(
            Document::from_text(std::move(doc_id), record.at("text").get<std::string>()));
    }
    return corpus;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::vector<LexiconEntry> entries;
    std::unordered_set<std::string> seen;
    auto lines = read_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto cols = split(line, '\t');
        if (cols.size() != 4) {
            throw ParseError(where + ": expected 4 tab-separated columns, got " +
                             std::to_string(cols.size()));
        }
        LexiconEntry entry;
        entry.term_tokens = tokenize_words(cols[0]);
        if (entry.term_tokens.empty()) {
            throw ParseError(where + ": term has no tokens: \"" + cols[0] + "\"");
        }
        if (!cols[1].empty()) {
            double fam = 0.0;
            try {
                std::size_t used = 0;
                fam = std::stod(cols[1], &used);
                if (used != cols[1].size()) {
                    throw std::invalid_argument("trailing characters");
                }
            } catch (const std::exception&) {
                throw ParseError(where + ": bad familiarity value \"" + cols[1] + "\"");
            }
            if (fam < 0.0 || fam > 1.0) {
                throw ParseError(where + ": familiarity outside [0,1]: " + cols[1]);
            }
            entry.familiarity = fam;
        }
        for (auto& label : split(cols[2], ';')) {
            if (!label.empty()) {
                entry.semantic_types.push_back(label);
            }
        }
        if (cols[3] == "0") {
            entry.vocab_member = false;
        } else if (cols[3] == "1") {
            entry.vocab_member = true;
        } else {
            throw ParseError(where + ": vocab_member must be 0 or 1, got \"" + cols[3] + "\"");
        }
        std::string key = join_tokens(entry.term_tokens);
        if (!seen.insert(key).second) {
            throw ValidationError(where + ": duplicate lexicon term \"" + key + "\"");
        }
        entries.push_back(std::move(entry));
    }
    return Lexicon(std::move(entries));
}

std::vector<CandidateTerm> extract_candidates(const Document& doc, const Lexicon& lexicon) {
    std::vector<CandidateTerm> candidates;
    std::unordered_map<std::string, std::size_t> by_id;
    std::size_t pos = 0;
    while (pos < doc.tokens.size()) {
        auto match = lexicon.longest_match(doc.tokens, pos);
        if (!match) {
            ++pos;
            continue;
        }
        auto [length, entry_index] = *match;
        TokenSpan span{pos, pos + length};
        std::vector<std::string> surface;
        surface.reserve(length);
        for (std::size_t i = span.begin; i < span.end; ++i) {
            surface.push_back(doc.tokens[i].text);
        }
        std::string id = join_tokens(surface);
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            CandidateTerm term;
            term.term_id = std::move(id);
            term.surface_tokens = std::move(surface);
            term.occurrences.push_back(span);
            term.lexicon_index = entry_index;
            by_id.emplace(term.term_id, candidates.size());
            candidates.push_back(std::move(term));
        } else {
            candidates[it->second].occurrences.push_back(span);
        }
        pos += length;
    }
    return candidates;
}

std::vector<CandidateTerm> import_candidates(const Document& doc,
                                             const std::filesystem::path& path) {
    std::vector<CandidateTerm> candidates;
    std::unordered_map<std::string, std::size_t> by_id;
    auto lines = read_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (line.empty()) {
            continue;
        }
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!record.is_object() || !record.contains("term") || !record.contains("spans")) {
            throw ParseError(where + ": expected {\"term\", \"spans\"}");
        }
        const std::string raw_term = record.at("term").get<std::string>();
        std::vector<std::string> surface = tokenize_words(raw_term);
        if (surface.empty()) {
            throw ValidationError(where + ": term has no tokens: \"" + raw_term + "\"");
        }
        for (const auto& span_json : record.at("spans")) {
            if (!span_json.is_array() || span_json.size() != 2) {
                throw ParseError(where + ": span must be [begin, end]");
            }
            auto begin = span_json[0].get<std::int64_t>();
            auto end = span_json[1].get<std::int64_t>();
            if (begin < 0 || end <= begin ||
                static_cast<std::size_t>(end) > doc.tokens.size()) {
                throw ValidationError(where + ": span [" + std::to_string(begin) + "," +
                                      std::to_string(end) + ") out of range for \"" + raw_term +
                                      "\"");
            }
            TokenSpan span{static_cast<std::size_t>(begin), static_cast<std::size_t>(end)};
            if (span.end - span.begin != surface.size()) {
                throw ValidationError(where + ": span length does not match term \"" + raw_term +
                                      "\"");
            }
            for (std::size_t k = 0; k < surface.size(); ++k) {
                if (doc.tokens[span.begin + k].text != surface[k]) {
                    throw ValidationError(where + ": document tokens at span differ from term \"" +
                                          raw_term + "\"");
                }
            }
            std::string id = join_tokens(surface);
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                CandidateTerm term;
                term.term_id = id;
                term.surface_tokens = surface;
                term.occurrences.push_back(span);
                by_id.emplace(std::move(id), candidates.size());
                candidates.push_back(std::move(term));
            } else {
                candidates[it->second].occurrences.push_back(span);
            }
        }
    }
    for (auto& term : candidates) {
        std::sort(term.occurrences.begin(), term.occurrences.end(),
                  [](const TokenSpan& a, const TokenSpan& b) {
                      return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
                  });
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const CandidateTerm& a, const CandidateTerm& b) {
                         return a.first_position() < b.first_position();
                     });
    return candidates;
}

std::string candidates_to_jsonl(const std::vector<CandidateTerm>& candidates) {
    std::string out;
    for (const CandidateTerm& term : candidates) {
        json spans = json::array();
        for (const TokenSpan& span : term.occurrences) {
            spans.push_back({span.begin, span.end});
        }
        json record{{"term", term.term_id}, {"spans", spans}};
        out += record.dump();
        out.push_back('\n');
    }
    return out;
}

void link_candidates(std::vector<CandidateTerm>& candidates, const Lexicon& lexicon) {
    for (CandidateTerm& term : candidates) {
        if (!term.lexicon_index) {
            term.lexicon_index = lexicon.find(term.surface_tokens);
        }
    }
}

}  // namespace termrank
