#include "pgae/vocab.hpp"

#include <fstream>
#include <stdexcept>

namespace pgae {

namespace {
const char* const kSignalNames[kNumSignals] = {"describe", "execute", "repeat-action", "repeat-both",
                                               "repeat-language"};
const char* const kSignalTokens[kNumSignals] = {"<describe>", "<execute>", "<repeat-action>",
                                                "<repeat-both>", "<repeat-language>"};
}  // namespace

const char* signal_name(TaskSignal s) { return kSignalNames[static_cast<int>(s)]; }

bool signal_from_name(const std::string& name, TaskSignal& out) {
    for (int i = 0; i < kNumSignals; ++i)
        if (name == kSignalNames[i]) {
            out = static_cast<TaskSignal>(i);
            return true;
        }
    return false;
}

Vocab Vocab::from_grammar(const Grammar& g) {
    std::vector<std::string> tokens;
    tokens.reserve(kVocabSize);
    for (const auto& syns : g.verbs)
        for (const auto& w : syns) tokens.push_back(w);
    for (const auto& syns : g.colours)
        for (const auto& w : syns) tokens.push_back(w);
    for (const auto& syns : g.speeds)
        for (const auto& w : syns) tokens.push_back(w);
    tokens.push_back("<eos>");
    for (const char* t : kSignalTokens) tokens.push_back(t);
    return from_tokens(std::move(tokens));
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
    Vocab v;
    v.tokens_ = std::move(tokens);
    v.build_index();
    return v;
}

Vocab Vocab::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("failed to open vocabulary file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) tokens.push_back(line);
    }
    return from_tokens(std::move(tokens));
}

void Vocab::build_index() {
    index_.clear();
    eos_ = -1;
    for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) {
        if (!index_.emplace(tokens_[i], i).second)
            throw std::runtime_error("duplicate vocabulary token: " + tokens_[i]);
        if (tokens_[i] == "<eos>") eos_ = i;
    }
    if (eos_ < 0) throw std::runtime_error("vocabulary has no <eos> token");
}

int Vocab::index(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) throw std::runtime_error("unknown word: '" + token + "'");
    return it->second;
}

bool Vocab::contains(const std::string& token) const { return index_.count(token) != 0; }

const std::string& Vocab::token(int idx) const {
    if (idx < 0 || idx >= size()) throw std::out_of_range("vocabulary index out of range");
    return tokens_[static_cast<std::size_t>(idx)];
}

int Vocab::signal_token(TaskSignal s) const { return index(kSignalTokens[static_cast<int>(s)]); }

void Vocab::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("failed to write vocabulary file: " + path);
    for (const auto& t : tokens_) out << t << '\n';
}

TokenSeq tokenize(const Vocab& v, const std::vector<std::string>& words, TaskSignal signal) {
    TokenSeq seq;
    seq.reserve(words.size() + 2);
    seq.push_back(v.signal_token(signal));
    for (const auto& w : words) seq.push_back(v.index(w));
    seq.push_back(v.eos());
    return seq;
}

std::vector<std::string> detokenize(const Vocab& v, const TokenSeq& seq) {
    std::vector<std::string> words;
    for (int t : seq) {
        if (t == v.eos() || v.is_signal(t)) continue;
        words.push_back(v.token(t));
    }
    return words;
}

}  // namespace pgae
