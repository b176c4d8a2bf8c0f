#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "framelet/corpus.hpp"
#include "framelet/io.hpp"
#include "framelet/lowrank.hpp"
#include "framelet/mra.hpp"
#include "framelet/parallel.hpp"
#include "framelet/pr_analysis.hpp"
#include "framelet/restoration.hpp"
#include "framelet/trainer.hpp"

namespace framelet
{

namespace
{

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_matrix(const std::string& path, const MatrixXd& M, std::ostream& out)
{
    if (path.empty() || path == "-")
    {
        io::write_matrix(out, M);
    }
    else
    {
        io::write_matrix(path, M);
    }
}

void emit_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-")
    {
        out << text;
        return;
    }
    std::ofstream os(path);
    if (!os)
    {
        throw FileError("cannot write " + path);
    }
    os << text;
}

struct OperatorSpec
{
    std::string mode; // identity | rank | net | mra
    Index rank = 0;
    std::string dir;
};

OperatorSpec parse_operator(const std::string& s)
{
    OperatorSpec o;
    if (s == "identity")
    {
        o.mode = "identity";
        return o;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
    {
        throw UsageError("--q expects identity, rank=<r>, net=<bankdir> or mra=<bankdir>");
    }
    o.mode = s.substr(0, eq);
    const std::string v = s.substr(eq + 1);
    if (o.mode == "rank")
    {
        try
        {
            std::size_t used = 0;
            o.rank           = std::stol(v, &used);
            if (used != v.size() || o.rank < 0)
            {
                throw UsageError("");
            }
        }
        catch (...)
        {
            throw UsageError("--q rank=<r> needs a nonnegative integer");
        }
    }
    else if (o.mode == "net" || o.mode == "mra")
    {
        o.dir = v;
    }
    else
    {
        throw UsageError("unknown restoration operator '" + o.mode + "'");
    }
    return o;
}

RestorationOperator<double> make_operator(const OperatorSpec& o, Index d)
{
    if (o.mode == "identity")
    {
        return identity_operator<double>();
    }
    if (o.mode == "rank")
    {
        return rank_shrink_operator<double>(d, o.rank);
    }
    const auto b = io::read_bank_dir(o.dir);
    if (o.mode == "net")
    {
        return network_operator<double>(b.net, b.banks);
    }
    return mra_operator<double>(b.net, b.mra_layers());
}

void apply_threads(int threads)
{
    if (threads > 0)
    {
        set_num_threads(threads);
        return;
    }
    if (const char* env = std::getenv("FRAMELET_THREADS"))
    {
        try
        {
            set_num_threads(std::max(1, std::stoi(env)));
        }
        catch (...)
        {
            throw UsageError("FRAMELET_THREADS must be an integer");
        }
    }
}

std::string report_lines(const std::vector<PrReport>& rs)
{
    std::string s;
    for (const auto& r : rs)
    {
        s += r.to_line() + "\n";
    }
    return s;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deep convolutional framelet toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (falls back to FRAMELET_THREADS)");

    std::string in, outp, trace, mask, truth, qspec, bankdir, netcfg, inputs, targets, init;
    std::string phi, phi_dual, psi, psi_dual, basis, guide, dlist, qlist, image, kind = "cosine";
    Index d = 4, p = 1, grid = 64, n = 0, iters = 200, count = 8;
    double tol = -1.0, mu = 0.99, lambda = 0.5, step = 1e-2;
    std::uint64_t seed = 1;
    bool zero_high = false;

    auto* lift_cmd = app.add_subcommand("lift", "wrap-around Hankel lift of a signal (or channels)");
    lift_cmd->add_option("--in", in)->required();
    lift_cmd->add_option("--d", d)->required();
    lift_cmd->add_option("--out", outp);

    auto* unlift_cmd = app.add_subcommand("unlift", "generalized inverse of lift");
    unlift_cmd->add_option("--in", in)->required();
    unlift_cmd->add_option("--p", p, "number of channel blocks");
    unlift_cmd->add_option("--out", outp);

    std::string what;
    auto* check_cmd = app.add_subcommand("check", "perfect-reconstruction checks");
    check_cmd->add_option("what", what, "frame | fourier | channels | rankbound")
        ->required()
        ->check(CLI::IsMember({"frame", "fourier", "channels", "rankbound"}));
    check_cmd->add_option("--phi", phi);
    check_cmd->add_option("--phi-dual", phi_dual);
    check_cmd->add_option("--basis", basis, "identity | haar | dct | avgpool | maxpool");
    check_cmd->add_option("--n", n);
    check_cmd->add_option("--guide", guide, "signal used to build a max-pooling basis");
    check_cmd->add_option("--psi", psi);
    check_cmd->add_option("--psi-dual", psi_dual);
    check_cmd->add_option("--p", p);
    check_cmd->add_option("--grid", grid);
    check_cmd->add_option("--d", dlist, "filter lengths, e.g. 2,2,2");
    check_cmd->add_option("--q", qlist, "channel counts to test against the minimum");
    check_cmd->add_option("--in", in);
    check_cmd->add_option("--bank", bankdir);
    check_cmd->add_option("--tol", tol);
    check_cmd->add_option("--out", outp);

    auto* denoise_cmd = app.add_subcommand("denoise", "one-shot restoration f = Q(g)");
    denoise_cmd->add_option("--in", in)->required();
    denoise_cmd->add_option("--q", qspec)->required();
    denoise_cmd->add_option("--d", d, "filter length for rank shrinkage");
    denoise_cmd->add_option("--out", outp);

    auto* inpaint_cmd = app.add_subcommand("inpaint", "relaxed fixed-point inpainting");
    inpaint_cmd->add_option("--in", in)->required();
    inpaint_cmd->add_option("--mask", mask)->required();
    inpaint_cmd->add_option("--q", qspec)->required();
    inpaint_cmd->add_option("--d", d);
    inpaint_cmd->add_option("--mu", mu);
    inpaint_cmd->add_option("--lambda", lambda);
    inpaint_cmd->add_option("--iters", iters);
    inpaint_cmd->add_option("--tol", tol);
    inpaint_cmd->add_option("--truth", truth);
    inpaint_cmd->add_option("--out", outp);
    inpaint_cmd->add_option("--trace", trace);

    auto* train_cmd = app.add_subcommand("train", "fit local filter banks by gradient descent");
    train_cmd->add_option("--inputs", inputs, "n x N matrix, one sample per column")->required();
    train_cmd->add_option("--targets", targets)->required();
    train_cmd->add_option("--net", netcfg)->required();
    train_cmd->add_option("--init", init, "bank directory to start from");
    train_cmd->add_option("--out", outp, "bank directory to write")->required();
    train_cmd->add_option("--trace", trace);
    train_cmd->add_option("--seed", seed);
    train_cmd->add_option("--iters", iters);
    train_cmd->add_option("--step", step);

    auto* mra_cmd = app.add_subcommand("mra", "multi-resolution encode/decode");
    auto* mra_in  = mra_cmd->add_option("--in", in);
    auto* mra_img = mra_cmd->add_option("--image", image, "8-bit PGM input");
    mra_in->excludes(mra_img);
    mra_cmd->add_option("--bank", bankdir)->required();
    mra_cmd->add_flag("--zero-high", zero_high, "drop all high bands before decoding");
    mra_cmd->add_option("--out", outp);

    auto* corpus_cmd = app.add_subcommand("corpus", "write a seeded toy training corpus");
    corpus_cmd->add_option("--kind", kind)->check(CLI::IsMember({"cosine", "spike"}));
    corpus_cmd->add_option("--n", n);
    corpus_cmd->add_option("--count", count);
    corpus_cmd->add_option("--seed", seed);
    corpus_cmd->add_option("--out", outp)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try
    {
        app.parse(rev);
    }
    catch (const CLI::CallForHelp& e)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try
    {
        apply_threads(threads);

        if (lift_cmd->parsed())
        {
            const MatrixXd Z = io::read_matrix(in);
            emit_matrix(outp, lift_extended(Z, d), out);
        }
        else if (unlift_cmd->parsed())
        {
            emit_matrix(outp, unlift_extended(io::read_matrix(in), p), out);
        }
        else if (check_cmd->parsed())
        {
            const double t = tol >= 0 ? tol : 1e-10;
            std::vector<PrReport> reps;
            if (what == "frame")
            {
                if (!phi.empty() || !basis.empty())
                {
                    MatrixXd A, B;
                    if (!phi.empty())
                    {
                        A = io::read_matrix(phi);
                        B = phi_dual.empty() ? A : io::read_matrix(phi_dual);
                    }
                    else
                    {
                        const auto k = basis_kind_from_string(basis);
                        if (!k || *k == BasisKind::svd)
                        {
                            throw UsageError("unknown --basis '" + basis + "'");
                        }
                        std::optional<MatrixXd> g;
                        if (*k == BasisKind::maxpool)
                        {
                            if (guide.empty())
                            {
                                throw UsageError("max pooling needs --guide");
                            }
                            g = MatrixXd(io::read_signal(guide));
                            n = g->rows();
                        }
                        if (n < 1)
                        {
                            throw UsageError("--basis needs --n");
                        }
                        const auto bp = make_basis<double>(*k, n, g ? &*g : nullptr);
                        A             = bp.phi;
                        B             = bp.phi_dual;
                    }
                    reps.push_back(check_frame_nonlocal(A, B, t));
                }
                if (!psi.empty())
                {
                    const MatrixXd A = io::read_matrix(psi);
                    const MatrixXd B = psi_dual.empty() ? A : io::read_matrix(psi_dual);
                    reps.push_back(check_frame_local(A, B, t));
                }
                if (reps.empty())
                {
                    throw UsageError("check frame needs --phi, --basis or --psi");
                }
            }
            else if (what == "fourier")
            {
                if (psi.empty())
                {
                    throw UsageError("check fourier needs --psi");
                }
                const MatrixXd A = io::read_matrix(psi);
                const MatrixXd B = psi_dual.empty() ? A : io::read_matrix(psi_dual);
                reps.push_back(check_pr_fourier(A, B, p, grid, t));
            }
            else if (what == "channels")
            {
                if (dlist.empty())
                {
                    throw UsageError("check channels needs --d");
                }
                const auto qmin = min_channels(io::parse_index_list(dlist));
                if (qlist.empty())
                {
                    std::string s = "min_channels\t";
                    for (std::size_t i = 0; i < qmin.size(); ++i)
                    {
                        s += (i ? "," : "") + std::to_string(qmin[i]);
                    }
                    emit_text(outp, s + "\n", out);
                    return 0;
                }
                const auto q = io::parse_index_list(qlist);
                if (q.size() != qmin.size())
                {
                    throw UsageError("--q and --d lists differ in length");
                }
                for (std::size_t i = 0; i < q.size(); ++i)
                {
                    reps.push_back(make_report("channels_layer" + std::to_string(i + 1),
                                               double(std::max<Index>(0, qmin[i] - q[i])), 0.0));
                }
            }
            else
            {
                if (in.empty() || bankdir.empty())
                {
                    throw UsageError("check rankbound needs --in and --bank");
                }
                const auto b = io::read_bank_dir(bankdir);
                const auto layers =
                    rank_bound_check(io::read_signal(in), b.net, b.banks, tol >= 0 ? tol : kDefaultRankTol);
                for (const auto& L : layers)
                {
                    reps.push_back(L.report());
                }
            }
            emit_text(outp, report_lines(reps), out);
        }
        else if (denoise_cmd->parsed())
        {
            const auto Q = make_operator(parse_operator(qspec), d);
            emit_matrix(outp, MatrixXd(denoise(io::read_signal(in), Q)), out);
        }
        else if (inpaint_cmd->parsed())
        {
            const auto Q = make_operator(parse_operator(qspec), d);
            InpaintProblem<double> pb;
            pb.g        = io::read_signal(in);
            pb.mask     = io::read_signal(mask);
            pb.mu       = mu;
            pb.lambda   = lambda;
            pb.max_iter = iters;
            if (tol >= 0)
            {
                pb.tol = tol;
            }
            if (!truth.empty())
            {
                pb.truth = io::read_signal(truth);
            }
            const auto res = inpaint(pb, Q);
            emit_matrix(outp, MatrixXd(res.f), out);
            std::ostringstream ts;
            write_trace_csv(ts, res.trace);
            if (!trace.empty())
            {
                emit_text(trace, ts.str(), out);
            }
            err << (res.converged ? "converged" : "not converged") << " after " << res.iterations
                << " iterations\n";
        }
        else if (train_cmd->parsed())
        {
            const MatrixXd X = io::read_matrix(inputs);
            const MatrixXd Y = io::read_matrix(targets);
            if (X.rows() != Y.rows() || X.cols() != Y.cols())
            {
                throw ParameterError("inputs and targets differ in shape");
            }
            TrainingSet<double> ts;
            for (Index j = 0; j < X.cols(); ++j)
            {
                ts.inputs.push_back(X.col(j));
                ts.targets.push_back(Y.col(j));
            }
            const NetworkSpec net = io::read_network(netcfg);
            TrainConfig cfg;
            cfg.step       = step;
            cfg.iterations = train_cmd->count("--iters") ? iters : 2000;
            cfg.seed       = seed;
            std::optional<Params<double>> start;
            if (!init.empty())
            {
                start = io::read_bank_dir(init).banks;
            }
            const auto res = fit(ts, net, cfg, start);
            io::write_bank_dir(outp, net, res.params);
            std::string csv = "step,loss\n";
            for (std::size_t i = 0; i < res.loss_trace.size(); ++i)
            {
                csv += std::to_string(i) + "," + fmt(res.loss_trace[i]) + "\n";
            }
            if (!trace.empty())
            {
                emit_text(trace, csv, out);
            }
            if (res.aborted)
            {
                err << "training aborted: non-finite loss\n";
                return 1;
            }
        }
        else if (mra_cmd->parsed())
        {
            const auto b = io::read_bank_dir(bankdir);
            if (!image.empty())
            {
                const auto net2d = b.mra_2d();
                auto st          = net2d.encode(io::read_pgm(image));
                if (zero_high)
                {
                    for (auto& layer : st.high)
                        for (auto& s : layer)
                        {
                            s.lh.setZero();
                            s.hl.setZero();
                            s.hh.setZero();
                        }
                }
                const MatrixXd rec = net2d.decode(st);
                if (outp.empty())
                {
                    throw UsageError("--image needs --out");
                }
                io::write_pgm(outp, rec);
            }
            else
            {
                if (in.empty())
                {
                    throw UsageError("mra needs --in or --image");
                }
                const VectorXd f    = io::read_signal(in);
                const auto layers   = b.mra_layers();
                auto st             = mra_encode(f, b.net, layers);
                const double energy = mra_energy(st, b.net);
                if (zero_high)
                {
                    for (auto& h : st.high)
                    {
                        h.setZero();
                    }
                }
                const VectorXd rec = mra_decode(st, b.net, layers);
                emit_matrix(outp, MatrixXd(rec), out);
                if (!outp.empty() && outp != "-")
                {
                    out << "energy_input\t" << fmt(f.squaredNorm()) << "\n";
                    out << "energy_bands\t" << fmt(energy) << "\n";
                }
            }
        }
        else if (corpus_cmd->parsed())
        {
            const Index len   = n > 0 ? n : 16;
            const auto ts     = kind == "cosine" ? cosine_corpus(len, count, seed)
                                                 : spike_corpus(len, count, seed);
            MatrixXd X(len, ts.size()), Y(len, ts.size());
            for (Index j = 0; j < ts.size(); ++j)
            {
                X.col(j) = ts.inputs[static_cast<std::size_t>(j)];
                Y.col(j) = ts.targets[static_cast<std::size_t>(j)];
            }
            std::filesystem::create_directories(outp);
            io::write_matrix(std::filesystem::path(outp) / "inputs.txt", X);
            io::write_matrix(std::filesystem::path(outp) / "targets.txt", Y);
        }
        return 0;
    }
    catch (const UsageError& e)
    {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace framelet
