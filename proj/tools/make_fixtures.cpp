// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

// Regenerates the generated files under fixtures/.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>

#include "opinion/evaluation.hpp"
#include "opinion/synthetic.hpp"

using namespace opinion;

namespace {

template <typename Range>
void write_jsonl(const std::string& path, const Range& items) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& item : items) out << synthetic::to_json(item).dump() << "\n";
    std::cout << path << ": " << items.size() << " lines\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: opinion-fixtures <output-dir>\n";
        return 2;
    }
    const std::string dir = argv[1];

    write_jsonl(dir + "/news_100.jsonl", synthetic::news_items(100, 7));

    const auto [train, test] = split_dataset(synthetic::separable_corpus(2000, 11), 0.2, 11);
    write_jsonl(dir + "/sep_train.jsonl", train);
    write_jsonl(dir + "/sep_test.jsonl", test);
    write_jsonl(dir + "/noisy_1000.jsonl", synthetic::order_sensitive_corpus(1000, 0.1, 13));

    std::ofstream vocab(dir + "/sep_vocab.txt", std::ios::binary);
    std::vector<std::string> words;
    for (const auto& w : synthetic::labelled_vocab()) words.push_back(w);
    std::sort(words.begin(), words.end());
    for (const auto& w : words) vocab << w << "\n";
    std::cout << dir << "/sep_vocab.txt: " << words.size() << " words\n";
    return 0;
}
