#pragma once

#include <map>
#include <string>
#include <vector>

#include "mepcs/empirical.hpp"
#include "mepcs/weights.hpp"

namespace mepcs {

// Signal files: one decimal real per line, UTF-8 text.
void write_signal(const std::vector<double>& x, const std::string& path);
std::vector<double> read_signal(const std::string& path);

// Block tables: one line per block, symbols joined by commas, then a single
// space and the value. Shared by distribution and weight-table files.
void write_block_table(const std::map<Block, double>& entries, const Alphabet& alphabet,
                       int order, const std::string& path);
std::map<Block, double> read_block_table(const std::string& path, const Alphabet& alphabet,
                                         int* order_out);

void write_distribution(const TrueBlockDistribution& dist, const std::string& path);
TrueBlockDistribution read_distribution(const std::string& path, const Alphabet& alphabet);

void write_weights(const WeightVector& wv, const std::string& path);
WeightVector read_weights(const std::string& path, const Alphabet& alphabet, double cap = -1.0);

// Shortest decimal form that round-trips a double.
std::string format_double(double v);

}  // namespace mepcs
