///
/// \file io.hpp
///
/// Text matrix files, network configs, 8-bit PGM images and bank directories.
///
#ifndef FRAMELET_IO_HPP
#define FRAMELET_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/mra.hpp"
#include "framelet/network.hpp"

namespace framelet
{

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error
{
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          m_line(line)
    {
    }

    std::size_t line() const noexcept
    {
        return m_line;
    }

private:
    std::size_t m_line;
};

/// Could not open or write a file.
class FileError : public Error
{
public:
    using Error::Error;
};

namespace io
{

/// `rows cols` header, then one row per line, 17 significant digits.
void write_matrix(std::ostream& os, const MatrixXd& M);
void write_matrix(const std::filesystem::path& path, const MatrixXd& M);
MatrixXd read_matrix(std::istream& is, const std::string& source = "<stream>");
MatrixXd read_matrix(const std::filesystem::path& path);

/// Reads a matrix file that must have exactly one column.
VectorXd read_signal(const std::filesystem::path& path);

/// Lines `layer <l> d=<int> q=<int> nonlocal=<kind> relu=<0|1> bypass=<0|1>`;
/// `#` starts a comment.
NetworkSpec parse_network(std::istream& is, const std::string& source = "<stream>");
NetworkSpec read_network(const std::filesystem::path& path);
void write_network(std::ostream& os, const NetworkSpec& net);

/// Binary 8-bit PGM (P5). Pixel values map to `[0, 1]`.
MatrixXd read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const MatrixXd& image);

///
/// A bank directory holds `network.cfg` and, per layer `l` (1-based),
/// `layer<l>_psi.txt`, `layer<l>_psi_dual.txt`, `layer<l>_b_enc.txt`,
/// `layer<l>_b_dec.txt` and optionally `layer<l>_high_dual.txt`. A layer
/// has `d` taps per input channel, or `d * d` for 2-D patches. Bias files
/// are optional and default to zero.
///
struct BankDir
{
    NetworkSpec net;
    std::vector<FilterBank<double>> banks;
    std::vector<std::optional<MatrixXd>> high_dual;

    std::vector<MraLayer<double>> mra_layers() const;
    Mra2dNetwork<double> mra_2d() const;
};

BankDir read_bank_dir(const std::filesystem::path& dir);
void write_bank_dir(const std::filesystem::path& dir, const NetworkSpec& net,
                    const std::vector<FilterBank<double>>& banks);

/// Comma-separated integers, e.g. `2,2,2`.
std::vector<Index> parse_index_list(const std::string& s);

} // namespace io

/// Runs the command-line tool. Returns 0 on success, 1 on data errors, 2 on
/// usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace framelet

#endif /* FRAMELET_IO_HPP */
