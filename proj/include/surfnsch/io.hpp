// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include "surfnsch/diagnostics.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace surfnsch {

/// Version tag written as the first CSV line.
inline constexpr const char* kCsvSchema = "# surfnsch-diagnostics v1";

std::string csv_header();
std::string csv_line(const DiagnosticsRow& row);

/// Streams diagnostics rows to a CSV file: schema tag, column header, one line per row.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void append(const DiagnosticsRow& row);
    std::size_t rows() const { return rows_; }

private:
    std::ofstream out_;
    std::size_t rows_ = 0;
};

/// Reads rows written by CsvWriter.
std::vector<DiagnosticsRow> read_csv(const std::string& path);

/// Vertex data of a snapshot (P2 edge values are not written).
struct Snapshot {
    double t = 0.0;
    int step = 0;
    std::vector<Vec3> points;
    std::vector<Tri> triangles;
    std::vector<double> phi, mu, p;
    std::vector<Vec3> u;
};

Snapshot snapshot_of(const SolverState& state);

/// Legacy ASCII VTK POLYDATA with 17 significant digits.
void write_snapshot(const SolverState& state, const std::string& path);
void write_snapshot(const Snapshot& snap, const std::string& path);
Snapshot read_snapshot(const std::string& path);

} // namespace surfnsch
