#include "framelet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace framelet::io
{

namespace
{

std::ifstream open_in(const std::filesystem::path& path, bool binary = false)
{
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is)
    {
        throw FileError("cannot open " + path.string());
    }
    return is;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false)
{
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os)
    {
        throw FileError("cannot write " + path.string());
    }
    return os;
}

std::string strip_comment(const std::string& line)
{
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool parse_long(const std::string& tok, long& out)
{
    try
    {
        std::size_t used = 0;
        out              = std::stol(tok, &used);
        return used == tok.size();
    }
    catch (...)
    {
        return false;
    }
}

bool parse_double(const std::string& tok, double& out)
{
    try
    {
        std::size_t used = 0;
        out              = std::stod(tok, &used);
        return used == tok.size() && std::isfinite(out);
    }
    catch (...)
    {
        return false;
    }
}

} // namespace

void write_matrix(std::ostream& os, const MatrixXd& M)
{
    os << M.rows() << ' ' << M.cols() << '\n';
    char buf[40];
    for (Index i = 0; i < M.rows(); ++i)
    {
        for (Index j = 0; j < M.cols(); ++j)
        {
            std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
            if (j)
            {
                os << ' ';
            }
            os << buf;
        }
        os << '\n';
    }
}

void write_matrix(const std::filesystem::path& path, const MatrixXd& M)
{
    auto os = open_out(path);
    write_matrix(os, M);
    if (!os)
    {
        throw FileError("failed writing " + path.string());
    }
}

MatrixXd read_matrix(std::istream& is, const std::string& source)
{
    std::string line;
    std::size_t lineno = 0;
    long rows = -1, cols = -1;
    while (rows < 0 && std::getline(is, line))
    {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a))
        {
            continue;
        }
        if (!(ls >> b) || (ls >> extra) || !parse_long(a, rows) || !parse_long(b, cols) ||
            rows < 1 || cols < 1)
        {
            throw ParseError(source, lineno, "expected header 'rows cols' with positive integers");
        }
    }
    if (rows < 0)
    {
        throw ParseError(source, lineno, "missing header");
    }
    MatrixXd M(rows, cols);
    long r = 0;
    while (r < rows)
    {
        if (!std::getline(is, line))
        {
            throw ParseError(source, lineno, "expected " + std::to_string(rows) + " rows, found " +
                                                 std::to_string(r));
        }
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        long c = 0;
        bool any = false;
        while (ls >> tok)
        {
            any = true;
            if (c >= cols)
            {
                throw ParseError(source, lineno, "too many values in row");
            }
            double v = 0.0;
            if (!parse_double(tok, v))
            {
                throw ParseError(source, lineno, "not a finite number: '" + tok + "'");
            }
            M(r, c++) = v;
        }
        if (!any)
        {
            continue;
        }
        if (c != cols)
        {
            throw ParseError(source, lineno, "expected " + std::to_string(cols) + " values, found " +
                                                 std::to_string(c));
        }
        ++r;
    }
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.find_first_not_of(" \t\r") != std::string::npos)
        {
            throw ParseError(source, lineno, "trailing data after " + std::to_string(rows) + " rows");
        }
    }
    return M;
}

MatrixXd read_matrix(const std::filesystem::path& path)
{
    auto is = open_in(path);
    return read_matrix(is, path.string());
}

VectorXd read_signal(const std::filesystem::path& path)
{
    const MatrixXd M = read_matrix(path);
    if (M.cols() != 1)
    {
        throw ParseError(path.string(), 1, "expected a signal with one column, got " +
                                               std::to_string(M.cols()));
    }
    return M.col(0);
}

NetworkSpec parse_network(std::istream& is, const std::string& source)
{
    NetworkSpec net;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        std::istringstream ls(strip_comment(line));
        std::string word;
        if (!(ls >> word))
        {
            continue;
        }
        if (word != "layer")
        {
            throw ParseError(source, lineno, "expected 'layer', got '" + word + "'");
        }
        std::string idx;
        long l = 0;
        if (!(ls >> idx) || !parse_long(idx, l))
        {
            throw ParseError(source, lineno, "missing layer index");
        }
        if (l != net.depth() + 1)
        {
            throw ParseError(source, lineno, "layers must be numbered contiguously from 1");
        }
        LayerSpec L;
        bool have_d = false, have_q = false;
        std::string kv;
        while (ls >> kv)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
            {
                throw ParseError(source, lineno, "expected key=value, got '" + kv + "'");
            }
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            long v                = 0;
            if (key == "d" || key == "q")
            {
                if (!parse_long(val, v) || v < 1)
                {
                    throw ParseError(source, lineno, key + " must be a positive integer");
                }
                (key == "d" ? L.d : L.q) = v;
                (key == "d" ? have_d : have_q) = true;
            }
            else if (key == "nonlocal")
            {
                const auto k = basis_kind_from_string(val);
                if (!k || *k == BasisKind::svd)
                {
                    throw ParseError(source, lineno, "unknown non-local basis '" + val + "'");
                }
                L.nonlocal = *k;
            }
            else if (key == "relu" || key == "bypass")
            {
                if (val != "0" && val != "1")
                {
                    throw ParseError(source, lineno, key + " must be 0 or 1");
                }
                (key == "relu" ? L.relu : L.bypass) = val == "1";
            }
            else
            {
                throw ParseError(source, lineno, "unknown key '" + key + "'");
            }
        }
        if (!have_d || !have_q)
        {
            throw ParseError(source, lineno, "layer needs both d= and q=");
        }
        net.layers.push_back(L);
    }
    return net;
}

NetworkSpec read_network(const std::filesystem::path& path)
{
    auto is = open_in(path);
    return parse_network(is, path.string());
}

void write_network(std::ostream& os, const NetworkSpec& net)
{
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L = net.layers[static_cast<std::size_t>(l)];
        os << "layer " << (l + 1) << " d=" << L.d << " q=" << L.q
           << " nonlocal=" << to_string(L.nonlocal) << " relu=" << (L.relu ? 1 : 0)
           << " bypass=" << (L.bypass ? 1 : 0) << '\n';
    }
}

MatrixXd read_pgm(const std::filesystem::path& path)
{
    auto is         = open_in(path, true);
    const auto name = path.string();
    auto token      = [&]() {
        std::string t;
        char c = 0;
        while (is.get(c))
        {
            if (c == '#')
            {
                std::string skip;
                std::getline(is, skip);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c)))
            {
                if (!t.empty())
                {
                    break;
                }
                continue;
            }
            t.push_back(c);
        }
        return t;
    };
    if (token() != "P5")
    {
        throw ParseError(name, 1, "not a binary PGM (P5)");
    }
    long w = 0, h = 0, maxval = 0;
    if (!parse_long(token(), w) || !parse_long(token(), h) || !parse_long(token(), maxval) || w < 1 ||
        h < 1)
    {
        throw ParseError(name, 1, "bad PGM header");
    }
    if (maxval != 255)
    {
        throw ParseError(name, 1, "only 8-bit PGM (maxval 255) is supported");
    }
    std::vector<unsigned char> buf(static_cast<std::size_t>(w * h));
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (is.gcount() != static_cast<std::streamsize>(buf.size()))
    {
        throw ParseError(name, 0, "truncated PGM pixel data");
    }
    MatrixXd X(h, w);
    for (long r = 0; r < h; ++r)
    {
        for (long c = 0; c < w; ++c)
        {
            X(r, c) = double(buf[static_cast<std::size_t>(r * w + c)]) / 255.0;
        }
    }
    return X;
}

void write_pgm(const std::filesystem::path& path, const MatrixXd& image)
{
    auto os = open_out(path, true);
    os << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
    std::vector<unsigned char> buf(static_cast<std::size_t>(image.size()));
    for (Index r = 0; r < image.rows(); ++r)
    {
        for (Index c = 0; c < image.cols(); ++c)
        {
            const double v = std::clamp(image(r, c), 0.0, 1.0);
            buf[static_cast<std::size_t>(r * image.cols() + c)] =
                static_cast<unsigned char>(std::lround(v * 255.0));
        }
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!os)
    {
        throw FileError("failed writing " + path.string());
    }
}

std::vector<MraLayer<double>> BankDir::mra_layers() const
{
    std::vector<MraLayer<double>> out;
    for (std::size_t l = 0; l < banks.size(); ++l)
    {
        auto L = MraLayer<double>::linear(banks[l]);
        if (l < high_dual.size() && high_dual[l])
        {
            L.high_dual = *high_dual[l];
        }
        out.push_back(std::move(L));
    }
    return out;
}

Mra2dNetwork<double> BankDir::mra_2d() const
{
    std::vector<MatrixXd> hd;
    for (const auto& h : high_dual)
    {
        hd.push_back(h ? *h : MatrixXd());
    }
    return build_2d_mra(net, banks, hd);
}

BankDir read_bank_dir(const std::filesystem::path& dir)
{
    BankDir b;
    b.net = read_network(dir / "network.cfg");
    for (Index l = 0; l < b.net.depth(); ++l)
    {
        const std::string stem = "layer" + std::to_string(l + 1) + "_";
        const MatrixXd psi     = read_matrix(dir / (stem + "psi.txt"));
        const MatrixXd dual    = read_matrix(dir / (stem + "psi_dual.txt"));
        const Index p          = b.net.p(l);
        if (psi.rows() % p != 0)
        {
            throw ParseError((dir / (stem + "psi.txt")).string(), 1,
                             "row count not divisible by the channel count " + std::to_string(p));
        }
        FilterBank<double> bank = make_bank(psi, dual, p);
        const auto& L           = b.net.layers[static_cast<std::size_t>(l)];
        // 2-D layers store d x d patches, so d^2 taps per channel
        if ((bank.d != L.d && bank.d != L.d * L.d) || bank.q != L.q)
        {
            throw ParseError((dir / (stem + "psi.txt")).string(), 1,
                             "bank is " + std::to_string(bank.d) + " taps x " + std::to_string(bank.q) +
                                 " channels, network.cfg says d=" + std::to_string(L.d) +
                                 " q=" + std::to_string(L.q));
        }
        const auto benc         = dir / (stem + "b_enc.txt");
        const auto bdec         = dir / (stem + "b_dec.txt");
        if (std::filesystem::exists(benc))
        {
            bank.b_enc = read_signal(benc);
        }
        if (std::filesystem::exists(bdec))
        {
            bank.b_dec = read_signal(bdec);
        }
        bank.validate();
        b.banks.push_back(std::move(bank));
        const auto hd = dir / (stem + "high_dual.txt");
        b.high_dual.push_back(std::filesystem::exists(hd) ? std::optional<MatrixXd>(read_matrix(hd))
                                                          : std::nullopt);
    }
    return b;
}

void write_bank_dir(const std::filesystem::path& dir, const NetworkSpec& net,
                    const std::vector<FilterBank<double>>& banks)
{
    std::filesystem::create_directories(dir);
    {
        auto os = open_out(dir / "network.cfg");
        write_network(os, net);
    }
    for (std::size_t l = 0; l < banks.size(); ++l)
    {
        const std::string stem = "layer" + std::to_string(l + 1) + "_";
        write_matrix(dir / (stem + "psi.txt"), banks[l].psi);
        write_matrix(dir / (stem + "psi_dual.txt"), banks[l].psi_dual);
        write_matrix(dir / (stem + "b_enc.txt"), MatrixXd(banks[l].b_enc));
        write_matrix(dir / (stem + "b_dec.txt"), MatrixXd(banks[l].b_dec));
    }
}

std::vector<Index> parse_index_list(const std::string& s)
{
    std::vector<Index> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
        long v = 0;
        if (!parse_long(tok, v))
        {
            throw ParseError("<argument>", 0, "not an integer list: '" + s + "'");
        }
        out.push_back(v);
    }
    if (out.empty())
    {
        throw ParseError("<argument>", 0, "empty integer list");
    }
    return out;
}

} // namespace framelet::io
