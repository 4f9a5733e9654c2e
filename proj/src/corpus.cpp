#include "dfd/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfd/csv.hpp"
#include "dfd/errors.hpp"

namespace dfd::corpus {

std::vector<std::string> tokenize(const std::string& text, const std::set<std::string>& stopwords) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            if (!stopwords.count(cur)) tokens.push_back(cur);
            cur.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isalpha(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open stopword list: " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        for (const auto& tok : tokenize(line, {})) out.insert(tok);
    }
    return out;
}

int CooccurrenceStats::index_of(const std::string& w) const {
    auto it = vocab_index.find(w);
    if (it == vocab_index.end()) throw ValidationError("out of vocabulary: '" + w + "'");
    return it->second;
}

double CooccurrenceStats::p(int i) const {
    return static_cast<double>(unigram_windows[i]) / static_cast<double>(total_windows);
}

std::int64_t CooccurrenceStats::pair_count(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = pair_windows.find({i, j});
    return it == pair_windows.end() ? 0 : it->second;
}

double CooccurrenceStats::p(int i, int j) const {
    return static_cast<double>(pair_count(i, j)) / static_cast<double>(total_windows);
}

CooccurrenceStats build_stats(const std::vector<Document>& docs, int window_size) {
    if (window_size < 2) throw ValidationError("window_size must be >= 2");

    CooccurrenceStats stats;
    stats.window_size = window_size;

    std::set<std::string> vocab_set;
    for (const auto& doc : docs)
        for (const auto& tok : doc.tokens) vocab_set.insert(tok);
    stats.vocab.assign(vocab_set.begin(), vocab_set.end());
    for (int i = 0; i < static_cast<int>(stats.vocab.size()); ++i) stats.vocab_index[stats.vocab[i]] = i;
    stats.unigram_windows.assign(stats.vocab.size(), 0);

    for (const auto& doc : docs) {
        const auto& toks = doc.tokens;
        if (toks.empty()) continue;
        const std::size_t w = static_cast<std::size_t>(window_size);
        // A document shorter than the window contributes a single window.
        const std::size_t n_windows = toks.size() <= w ? 1 : toks.size() - w + 1;
        for (std::size_t start = 0; start < n_windows; ++start) {
            const std::size_t end = std::min(start + w, toks.size());
            std::set<int> distinct;
            for (std::size_t t = start; t < end; ++t) distinct.insert(stats.vocab_index.at(toks[t]));
            for (int id : distinct) ++stats.unigram_windows[id];
            for (auto it = distinct.begin(); it != distinct.end(); ++it) {
                auto jt = it;
                for (++jt; jt != distinct.end(); ++jt) ++stats.pair_windows[{*it, *jt}];
            }
            ++stats.total_windows;
        }
    }

    if (stats.total_windows == 0) throw ValidationError("empty corpus");
    return stats;
}

namespace {

double pmi_by_index(const CooccurrenceStats& stats, int i, int j) {
    return std::log(stats.p(i, j) / (stats.p(i) * stats.p(j)));
}

}  // namespace

double pmi(const CooccurrenceStats& stats, const std::string& w1, const std::string& w2) {
    const int i = stats.index_of(w1);
    const int j = stats.index_of(w2);
    if (stats.pair_count(i, j) == 0)
        throw ComputeError("no co-occurrence between '" + w1 + "' and '" + w2 + "'");
    return pmi_by_index(stats, i, j);
}

double mutual_information(const CooccurrenceStats& stats) {
    double sum = 0;
    for (const auto& [key, count] : stats.pair_windows) {
        if (count == 0) continue;
        sum += stats.p(key.first, key.second) * pmi_by_index(stats, key.first, key.second);
    }
    return sum;
}

WordVector word_vector(const CooccurrenceStats& stats, const std::string& w) {
    const int i = stats.index_of(w);
    WordVector vec;
    vec.word = w;
    vec.values.assign(stats.vocab.size(), 0.0);
    for (int j = 0; j < static_cast<int>(stats.vocab.size()); ++j) {
        if (j == i) continue;  // self co-occurrence is not a context
        if (stats.pair_count(i, j) == 0) continue;
        vec.values[j] = std::max(0.0, pmi_by_index(stats, i, j));
    }
    return vec;
}

double cosine(const WordVector& a, const WordVector& b) {
    if (a.values.size() != b.values.size()) throw ValidationError("word vector length mismatch");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        dot += a.values[k] * b.values[k];
        na += a.values[k] * a.values[k];
        nb += b.values[k] * b.values[k];
    }
    if (na == 0.0 || nb == 0.0)
        throw ComputeError("zero vector in cosine ('" + a.word + "' vs '" + b.word + "')");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double dcw_score(const CooccurrenceStats& stats, const std::string& anchor, const std::string& word) {
    const double p = pmi(stats, anchor, word);
    const WordVector va = word_vector(stats, anchor);
    const WordVector vb = word_vector(stats, word);
    const auto norm = [](const WordVector& v) {
        double s = 0;
        for (double x : v.values) s += x * x;
        return s;
    };
    if (norm(va) == 0.0 || norm(vb) == 0.0)
        throw ComputeError("undefined DCW (orthogonal words): '" + anchor + "' vs '" + word + "'");
    const double c = cosine(va, vb);
    if (c <= kCosineFloor)
        throw ComputeError("undefined DCW (orthogonal words): '" + anchor + "' vs '" + word + "'");
    return p / c;
}

DcwRanking rank_features(const CooccurrenceStats& stats, const std::string& anchor, double threshold) {
    const int ai = stats.index_of(anchor);
    DcwRanking ranking;
    ranking.anchor = anchor;
    ranking.threshold = threshold;

    WordVector avec = word_vector(stats, anchor);
    for (int j = 0; j < static_cast<int>(stats.vocab.size()); ++j) {
        if (j == ai) continue;
        const std::string& word = stats.vocab[j];
        if (stats.pair_count(ai, j) == 0) {
            ++ranking.undefined_count;
            continue;
        }
        double c;
        try {
            c = cosine(avec, word_vector(stats, word));
        } catch (const ComputeError&) {
            ++ranking.undefined_count;
            continue;
        }
        if (c <= kCosineFloor) {
            ++ranking.undefined_count;
            continue;
        }
        const double p = pmi_by_index(stats, ai, j);
        ranking.entries.push_back(DcwEntry{word, p, c, p / c, false});
    }

    std::sort(ranking.entries.begin(), ranking.entries.end(), [](const DcwEntry& a, const DcwEntry& b) {
        if (a.dcw != b.dcw) return a.dcw > b.dcw;
        return a.word < b.word;
    });
    for (auto& e : ranking.entries) e.kept = e.dcw > threshold;
    return ranking;
}

std::string ranking_to_csv(const DcwRanking& ranking, const std::string& header) {
    std::ostringstream out;
    out << header;
    out << "# anchor=" << ranking.anchor << " threshold=" << csv::format_double(ranking.threshold)
        << " undefined=" << ranking.undefined_count << "\n";
    out << "word,pmi,cosine,dcw,kept\n";
    for (const auto& e : ranking.entries) {
        out << e.word << "," << csv::format_double(e.pmi) << "," << csv::format_double(e.cosine) << ","
            << csv::format_double(e.dcw) << "," << (e.kept ? "1" : "0") << "\n";
    }
    return out.str();
}

std::vector<Document> load_directory(const std::filesystem::path& dir, const std::set<std::string>& stopwords) {
    if (!std::filesystem::is_directory(dir)) throw ValidationError("corpus directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        Document doc;
        doc.id = f.stem().string();
        doc.text = buf.str();
        doc.tokens = tokenize(doc.text, stopwords);
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace dfd::corpus
