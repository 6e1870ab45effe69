#include "entangle/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "entangle/parallel.hpp"
#include "entangle/porter_stemmer.hpp"
#include "json.hpp"

namespace entangle {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char to_lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowered(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = to_lower_ascii(c);
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const json& require_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw CorpusError("manifest: " + where + " is missing \"" + key + "\"");
    return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const auto& v = require_field(obj, key, where);
    if (!v.is_string() || v.get<std::string>().empty())
        throw CorpusError("manifest: " + where + " has a non-string or empty \"" + key + "\"");
    return v.get<std::string>();
}

}  // namespace

PipelineConfig::PipelineConfig() {
    for (auto w : default_stoplist_words()) stoplist_.emplace(w);
}

PipelineConfig::PipelineConfig(std::span<const std::string> stopwords, bool stemming_enabled,
                               bool lowercase)
    : stemming_(stemming_enabled), lowercase_(lowercase) {
    for (const auto& w : stopwords) {
        if (!w.empty()) stoplist_.insert(lowercase ? lowered(w) : w);
    }
}

PipelineConfig PipelineConfig::with_default_stoplist(bool stemming_enabled, bool lowercase) {
    PipelineConfig c;
    c.stemming_ = stemming_enabled;
    c.lowercase_ = lowercase;
    return c;
}

PipelineConfig PipelineConfig::from_stoplist_file(const fs::path& path, bool stemming_enabled,
                                                  bool lowercase) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open stoplist: " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        words.push_back(line.substr(b, e - b + 1));
    }
    return PipelineConfig(words, stemming_enabled, lowercase);
}

bool PipelineConfig::is_stopword(std::string_view token) const {
    return stoplist_.find(std::string(token)) != stoplist_.end();
}

TermSequence tokenize_and_normalize(const RawDocument& raw, const PipelineConfig& config) {
    TermSequence seq{raw.doc_id, {}};
    const std::string_view text = raw.text;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_ascii_alpha(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_ascii_alpha(text[j])) ++j;
        std::string token(text.substr(i, j - i));
        i = j;
        if (config.lowercase()) token = lowered(token);
        if (config.is_stopword(token)) continue;
        if (config.stemming_enabled()) token = porter_stem(token);
        if (!token.empty()) seq.terms.push_back(std::move(token));
    }
    return seq;
}

std::vector<Window> segment_windows(const TermSequence& seq, std::size_t window_size) {
    if (window_size == 0) throw std::invalid_argument("window size must be positive");
    std::vector<Window> out;
    const auto n = seq.terms.size();
    out.reserve((n + window_size - 1) / window_size);
    for (std::size_t start = 0, idx = 0; start < n; start += window_size, ++idx) {
        const auto stop = std::min(n, start + window_size);
        out.push_back(Window{seq.doc_id, idx,
                             {seq.terms.begin() + static_cast<std::ptrdiff_t>(start),
                              seq.terms.begin() + static_cast<std::ptrdiff_t>(stop)}});
    }
    return out;
}

std::vector<Window> TopicCorpus::windows() const {
    std::vector<Window> out;
    for (const auto& doc : documents) {
        auto w = segment_windows(doc, window_size);
        out.insert(out.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    }
    return out;
}

std::size_t TopicCorpus::term_count() const {
    std::size_t n = 0;
    for (const auto& d : documents) n += d.terms.size();
    return n;
}

std::vector<TopicCorpus> load_topic_corpus(const fs::path& manifest_path,
                                           const PipelineConfig& config,
                                           std::size_t window_size) {
    if (window_size == 0) throw std::invalid_argument("window size must be positive");
    if (!fs::exists(manifest_path))
        throw CorpusError("manifest not found: " + manifest_path.string());

    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw CorpusError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    const auto& topics = require_field(manifest, "topics", "root object");
    if (!topics.is_array()) throw CorpusError("manifest: \"topics\" must be an array");

    const fs::path base = manifest_path.parent_path();
    std::vector<TopicCorpus> out;
    std::vector<RawDocument> raws;
    std::vector<std::size_t> owner;  // raws[i] belongs to out[owner[i]]
    std::set<std::string> topic_ids;

    for (std::size_t t = 0; t < topics.size(); ++t) {
        const auto& topic = topics[t];
        const std::string where = "topics[" + std::to_string(t) + "]";
        const auto topic_id = require_string(topic, "topic_id", where);
        if (!topic_ids.insert(topic_id).second)
            throw CorpusError("manifest: duplicate topic_id '" + topic_id + "'");
        const auto& docs = require_field(topic, "documents", "topic '" + topic_id + "'");
        if (!docs.is_array() || docs.empty())
            throw CorpusError("manifest: topic '" + topic_id + "' lists no documents");

        std::set<std::string> doc_ids;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const std::string dwhere =
                "topic '" + topic_id + "' documents[" + std::to_string(d) + "]";
            const auto doc_id = require_string(docs[d], "doc_id", dwhere);
            if (!doc_ids.insert(doc_id).second)
                throw CorpusError("manifest: duplicate doc_id '" + doc_id + "' in topic '" +
                                  topic_id + "'");
            fs::path path = require_string(docs[d], "path", dwhere);
            if (path.is_relative()) path = base / path;
            if (!fs::is_regular_file(path))
                throw CorpusError("topic '" + topic_id + "' document '" + doc_id +
                                  "': file not found: " + path.string());
            auto text = read_file(path);
            if (text.empty())
                throw CorpusError("topic '" + topic_id + "' document '" + doc_id +
                                  "': empty file: " + path.string());
            raws.push_back(RawDocument{doc_id, topic_id, std::move(text)});
            owner.push_back(out.size());
        }
        out.push_back(TopicCorpus{topic_id, {}, window_size});
    }

    std::vector<TermSequence> sequences(raws.size());
    parallel_for(raws.size(),
                 [&](std::size_t i) { sequences[i] = tokenize_and_normalize(raws[i], config); });
    for (std::size_t i = 0; i < sequences.size(); ++i)
        out[owner[i]].documents.push_back(std::move(sequences[i]));
    return out;
}

}  // namespace entangle
