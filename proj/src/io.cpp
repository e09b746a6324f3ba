#include "mepcs/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mepcs/errors.hpp"

namespace mepcs {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_signal(const std::vector<double>& x, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (double v : x) out << format_double(v) << '\n';
    if (!out) throw Error("write failed: " + path);
}

std::vector<double> read_signal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::vector<double> x;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        x.push_back(std::strtod(line.c_str(), nullptr));
    }
    return x;
}

void write_block_table(const std::map<Block, double>& entries, const Alphabet& alphabet,
                       int order, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    std::vector<std::uint32_t> symbols(static_cast<std::size_t>(order));
    for (const auto& [key, value] : entries) {
        unpack_block(key, order, alphabet.size(), symbols);
        for (int t = 0; t < order; ++t) {
            if (t) out << ',';
            out << format_double(alphabet[symbols[t]]);
        }
        out << ' ' << format_double(value) << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

std::map<Block, double> read_block_table(const std::string& path, const Alphabet& alphabet,
                                         int* order_out) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::map<Block, double> entries;
    int order = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto space = line.find(' ');
        if (space == std::string::npos) throw Error("malformed block table line: " + line);
        std::istringstream blocks(line.substr(0, space));
        std::string token;
        Block key = 0;
        int count = 0;
        while (std::getline(blocks, token, ',')) {
            const double v = std::strtod(token.c_str(), nullptr);
            key = key * alphabet.size() + alphabet.index_of(v);
            ++count;
        }
        if (order == 0)
            order = count;
        else if (order != count)
            throw Error("block table mixes block lengths: " + path);
        entries[key] = std::strtod(line.c_str() + space + 1, nullptr);
    }
    if (order == 0) throw Error("empty block table: " + path);
    if (order_out) *order_out = order;
    return entries;
}

void write_distribution(const TrueBlockDistribution& dist, const std::string& path) {
    write_block_table(dist.probs, dist.alphabet, dist.order, path);
}

TrueBlockDistribution read_distribution(const std::string& path, const Alphabet& alphabet) {
    TrueBlockDistribution dist;
    dist.alphabet = alphabet;
    dist.probs = read_block_table(path, alphabet, &dist.order);
    double total = 0.0;
    for (const auto& [key, p] : dist.probs) {
        if (p < 0.0) throw Error("distribution file has a negative mass: " + path);
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw Error("distribution file does not sum to 1: " + path);
    return dist;
}

void write_weights(const WeightVector& wv, const std::string& path) {
    write_block_table(wv.w, wv.alphabet, wv.order, path);
}

WeightVector read_weights(const std::string& path, const Alphabet& alphabet, double cap) {
    WeightVector wv;
    wv.alphabet = alphabet;
    wv.w = read_block_table(path, alphabet, &wv.order);
    wv.cap = cap > 0.0 ? cap : default_weight_cap(alphabet.bits(), wv.order - 1);
    return wv;
}

}  // namespace mepcs
