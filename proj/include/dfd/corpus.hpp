#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace dfd::corpus {

struct Document {
    std::string id;
    std::string text;
    std::vector<std::string> tokens;
};

// Lowercased alphabetic tokens; punctuation and digits act as separators,
// stopwords are removed, order is preserved.
std::vector<std::string> tokenize(const std::string& text, const std::set<std::string>& stopwords);

std::set<std::string> load_stopwords(const std::filesystem::path& path);

// Window-count co-occurrence statistics. Probabilities are count ratios over
// sliding windows (stride 1); a window counts each distinct word once; pairs
// are unordered over distinct words. Vocab is sorted, so identical corpora
// produce identical stats regardless of document ingestion order.
struct CooccurrenceStats {
    std::vector<std::string> vocab;
    std::unordered_map<std::string, int> vocab_index;
    std::vector<std::int64_t> unigram_windows;           // by vocab index
    std::map<std::pair<int, int>, std::int64_t> pair_windows;  // key i < j
    std::int64_t total_windows = 0;
    int window_size = 0;

    int index_of(const std::string& w) const;  // throws if unknown
    double p(int i) const;
    std::int64_t pair_count(int i, int j) const;
    double p(int i, int j) const;
};

CooccurrenceStats build_stats(const std::vector<Document>& docs, int window_size);

// Natural-log pointwise mutual information. Requires a positive pair count.
double pmi(const CooccurrenceStats& stats, const std::string& w1, const std::string& w2);

// Corpus-level mutual information, the diagnostic sum over observed pairs of
// p(x,y)*pmi(x,y). Plays no role in ranking.
double mutual_information(const CooccurrenceStats& stats);

struct WordVector {
    std::string word;
    std::vector<double> values;  // PPMI row over vocab order; self entry is 0
};

WordVector word_vector(const CooccurrenceStats& stats, const std::string& w);

double cosine(const WordVector& a, const WordVector& b);

inline constexpr double kCosineFloor = 1e-6;

// DCW = pmi(anchor, word) / cosine(anchor, word). Errors when the cosine is
// at or below the floor or the words never co-occur.
double dcw_score(const CooccurrenceStats& stats, const std::string& anchor, const std::string& word);

struct DcwEntry {
    std::string word;
    double pmi = 0;
    double cosine = 0;
    double dcw = 0;
    bool kept = false;
};

struct DcwRanking {
    std::string anchor;
    std::vector<DcwEntry> entries;  // dcw descending, ties by word ascending
    double threshold = 0;
    int undefined_count = 0;  // words skipped for undefined DCW
};

DcwRanking rank_features(const CooccurrenceStats& stats, const std::string& anchor, double threshold);

std::string ranking_to_csv(const DcwRanking& ranking, const std::string& header);

// Reads a directory of UTF-8 .txt files, one document per file, sorted by
// filename.
std::vector<Document> load_directory(const std::filesystem::path& dir, const std::set<std::string>& stopwords);

}  // namespace dfd::corpus
