"""Command-line surface: pdkernel <command>.

Every command is a pure function of its inputs, flags and seed; each run
writes a manifest sidecar with the resolved parameters and input hashes.
Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import sys

import click
import numpy as np

from . import __version__
from . import io as pio
from .errors import NumericalError, PdkernelError
from .filtration import build_cech, build_rips
from .geometry import PointCloud
from .kernels import (KernelSpec, cross_gram, gram, median_C, median_sigma,
                      median_tau, pssk_median_t)
from .learn import cross_validate, kfdr_curve, kpca, svm_predict, svm_train
from .metrics import bottleneck_distance, wasserstein_distance
from .persistence import compute_persistence
from .synth import synth_dataset
from .vectorizers import ArcWeight, OneWeight, PersLinearWeight
from .experiment import C_SVM_GRID, run_synth_experiment, _family_candidates


@click.group()
@click.version_option(__version__)
def cli():
    """Kernel methods on persistence diagrams."""


def _auto_float(_ctx, _param, value):
    if value is None or value == "auto":
        return None
    try:
        return float(value)
    except ValueError:
        raise click.BadParameter(f"expected a number or 'auto', got {value!r}")


@cli.command()
@click.argument("cloud_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--complex", "complex_kind", type=click.Choice(["cech", "rips"]),
              default="cech", show_default=True)
@click.option("--q", type=int, default=1, show_default=True,
              help="homology dimension to write")
@click.option("--rmax", callback=_auto_float, default="auto", show_default=True,
              help="filtration truncation radius")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--dump", type=click.Path(dir_okay=False), default=None,
              help="also dump the filtered complex (value dim v0 v1 ...)")
def diagram(cloud_csv, complex_kind, q, rmax, out, dump):
    """Compute a persistence diagram from a point-cloud CSV."""
    cloud = pio.read_cloud(cloud_csv)
    build = build_cech if complex_kind == "cech" else build_rips
    fc = build(cloud, q_max=max(q, 1), r_max=rmax)
    dgm = compute_persistence(fc, q)
    pio.write_diagrams(out, dgm)
    if dump:
        with open(dump, "w") as fh:
            fc.dump(fh)
    pio.write_manifest(out, "diagram",
                       {"complex": complex_kind, "q": q, "rmax": fc.r_max},
                       inputs=[cloud_csv])
    click.echo(f"wrote {len(dgm)} pairs (q={q}) to {out}")


@cli.command()
@click.argument("diagram_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("diagram_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--metric", type=click.Choice(["bottleneck", "wasserstein"]),
              default="bottleneck", show_default=True)
@click.option("--p", type=float, default=1.0, show_default=True,
              help="Wasserstein order")
@click.option("--q", type=int, default=None, help="dimension to read from the files")
def dist(diagram_a, diagram_b, metric, p, q):
    """Distance between two diagram CSVs (printed to stdout)."""
    A = pio.read_diagram(diagram_a, q=q)
    B = pio.read_diagram(diagram_b, q=q)
    if metric == "bottleneck":
        value = bottleneck_distance(A, B)
    else:
        value = wasserstein_distance(A, B, p=p)
    click.echo(pio.fmt(value))


def _weight_from_flags(weight_kind, cweight, pdeg, length):
    if weight_kind == "arc":
        return ArcWeight(cweight, pdeg)
    if weight_kind == "one":
        return OneWeight()
    return PersLinearWeight(length)


@cli.command(name="gram")
@click.argument("diagram_csvs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--kernel", type=click.Choice(["pwgk", "pssk", "pl", "pi"]), required=True)
@click.option("--outer", type=click.Choice(["linear", "gaussian"]), default="gaussian",
              show_default=True)
@click.option("--mode", type=click.Choice(["exact", "rff"]), default="exact",
              show_default=True)
@click.option("--mrff", type=int, default=1024, show_default=True)
@click.option("--sigma", callback=_auto_float, default="auto", show_default=True,
              help="Gaussian base bandwidth ('auto' = median heuristic)")
@click.option("--cweight", callback=_auto_float, default="auto", show_default=True,
              help="arc weight scale C ('auto' = median heuristic)")
@click.option("--pdeg", type=int, default=5, show_default=True,
              help="arc weight degree p")
@click.option("--tau", callback=_auto_float, default="auto", show_default=True,
              help="outer Gaussian width ('auto' = median RKHS distance)")
@click.option("--t", "t_pssk", callback=_auto_float, default="auto", show_default=True,
              help="PSSK time ('auto' = mirrored median heuristic)")
@click.option("--grid", type=int, default=20, show_default=True,
              help="persistence-image resolution M")
@click.option("--weight", "weight_kind", type=click.Choice(["arc", "one", "pers"]),
              default=None, help="weight override (default: arc for pwgk, pers for pi)")
@click.option("--q", type=int, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gram_cmd(diagram_csvs, kernel, outer, mode, mrff, sigma, cweight, pdeg,
             tau, t_pssk, grid, weight_kind, q, seed, out):
    """Gram matrix of a list of diagram CSVs."""
    diagrams = [pio.read_diagram(p, q=q) for p in diagram_csvs]
    resolved = {"kernel": kernel, "outer": outer, "mode": mode}
    if kernel in ("pwgk", "pi"):
        if sigma is None:
            sigma = median_sigma(diagrams)
        resolved["sigma"] = sigma
    if kernel == "pwgk":
        wk = weight_kind or "arc"
        if wk == "arc" and cweight is None:
            cweight = median_C(diagrams, pdeg)
            resolved["cweight"] = cweight
        length = max(float(np.max(d.pairs[:, 1])) for d in diagrams if len(d)) \
            if wk == "pers" else None
        spec = KernelSpec(family="kw", base="gaussian", sigma=sigma,
                          weight=_weight_from_flags(wk, cweight, pdeg, length),
                          outer=outer)
    elif kernel == "pssk":
        if t_pssk is None:
            t_pssk = pssk_median_t(diagrams)
        resolved["t"] = t_pssk
        spec = KernelSpec(family="pssk", t=t_pssk, outer=outer)
    elif kernel == "pl":
        spec = KernelSpec(family="pl", outer=outer)
    else:  # pi
        length = max(float(np.max(d.pairs[:, 1])) for d in diagrams if len(d))
        wk = weight_kind or "pers"
        spec = KernelSpec(family="pi", grid_size=grid, length=length,
                          sigma_img=sigma, outer=outer,
                          weight=_weight_from_flags(wk, cweight, pdeg, length))
        resolved.update(grid=grid, length=length)
    if outer == "gaussian":
        if tau is None:
            tau = median_tau(diagrams, spec)
            if not tau > 0:
                raise NumericalError("median tau is 0 (identical diagrams); pass --tau")
        from dataclasses import replace
        spec = replace(spec, tau=tau)
        resolved["tau"] = tau
    G = gram(diagrams, spec, mode=mode, m_rff=mrff if mode == "rff" else None,
             seed=seed)
    pio.write_matrix(out, G.values)
    if mode == "rff":
        resolved["mrff"] = mrff
    resolved["spec"] = spec.describe()
    pio.write_manifest(out, "gram", resolved, inputs=diagram_csvs, seed=seed)
    click.echo(f"wrote {G.n}x{G.n} gram to {out}")


@cli.command()
@click.option("--gram", "gram_csv", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--gamma", type=float, default=1e-3, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write the KFDR curve (one value per split)")
def kfdr(gram_csv, gamma, out):
    """Change-point statistic over an ordered Gram matrix."""
    G = pio.read_matrix(gram_csv)
    curve = kfdr_curve(G, gamma=gamma)
    click.echo(f"argmax split: {curve.argmax}")
    if out:
        pio.write_matrix(out, curve.values.reshape(-1, 1))
        pio.write_manifest(out, "kfdr", {"gamma": gamma}, inputs=[gram_csv])


@cli.command(name="kpca")
@click.option("--gram", "gram_csv", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("-k", type=int, default=2, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def kpca_cmd(gram_csv, k, out):
    """Kernel PCA scores from a Gram matrix."""
    G = pio.read_matrix(gram_csv)
    emb = kpca(G, k)
    pio.write_matrix(out, emb.coordinates)
    pio.write_manifest(out, "kpca", {"k": k}, inputs=[gram_csv])
    contrib = ", ".join(pio.fmt(c) for c in emb.contribution)
    click.echo(f"cumulative contribution: {contrib}")


@cli.command()
@click.option("--n", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--outdir", type=click.Path(file_okay=False), required=True)
def synth(n, seed, outdir):
    """Generate a synthetic two-circle XOR dataset."""
    samples = synth_dataset(n, seed)
    pio.write_dataset(outdir, samples)
    pio.write_manifest(f"{outdir}/dataset", "synth", {"n": n}, seed=seed)
    click.echo(f"wrote {n} samples to {outdir}")


@cli.command()
@click.option("--train", "train_dir", type=click.Path(exists=True, file_okay=False),
              required=True)
@click.option("--test", "test_dir", type=click.Path(exists=True, file_okay=False),
              required=True)
@click.option("--cv", type=int, default=10, show_default=True)
@click.option("--kernel", type=click.Choice(["pwgk", "pssk", "pl", "pi"]),
              default="pwgk", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def classify(train_dir, test_dir, cv, kernel, seed):
    """Train a CV-tuned SVM on one dataset directory, score another."""
    from .persistence import cech_diagram

    fam_key = {"pwgk": ("gaussian", "arc_p5", "gaussian"),
               "pssk": ("pssk", "pss", "linear"),
               "pl": ("landscape", "-", "linear"),
               "pi": ("image20", "pers", "linear")}[kernel]
    train_clouds, train_rows = pio.read_dataset(train_dir)
    test_clouds, test_rows = pio.read_dataset(test_dir)
    train_d = [cech_diagram(c, q=1) for c in train_clouds]
    test_d = [cech_diagram(c, q=1) for c in test_clouds]
    train_y = np.array([2 * r["label"] - 1 for r in train_rows], dtype=float)
    test_y = np.array([2 * r["label"] - 1 for r in test_rows], dtype=float)
    specs = _family_candidates(train_d)[fam_key]
    spec, c_svm, cv_acc = cross_validate(
        train_d, train_y, [(s, c) for s in specs for c in C_SVM_GRID],
        folds=cv, seed=seed)
    model = svm_train(gram(train_d, spec), train_y, c_svm)
    pred = svm_predict(model, cross_gram(test_d, train_d, spec))
    acc = float((pred == test_y).mean())
    click.echo(f"cv accuracy: {pio.fmt(cv_acc)}")
    click.echo(f"test accuracy: {pio.fmt(acc)}")


@cli.command(name="experiment-synth")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--seeds", "n_seeds", type=int, default=5, show_default=True)
@click.option("--ntrain", type=int, default=100, show_default=True)
@click.option("--ntest", type=int, default=100, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--verbose/--quiet", default=True)
def experiment_synth(seed, n_seeds, ntrain, ntest, out, verbose):
    """Full synthetic benchmark: all kernel families, accuracy table."""
    log = click.echo if verbose else None
    rows = run_synth_experiment(base_seed=seed, n_seeds=n_seeds,
                                n_train=ntrain, n_test=ntest, log=log)
    with open(out, "w") as fh:
        fh.write("kernel,weight,outer,mean_acc,std_acc\n")
        for kernel, weight, outer, mean_acc, std_acc in rows:
            fh.write(f"{kernel},{weight},{outer},{pio.fmt(mean_acc)},{pio.fmt(std_acc)}\n")
    pio.write_manifest(out, "experiment-synth",
                       {"seeds": n_seeds, "ntrain": ntrain, "ntest": ntest},
                       seed=seed)
    click.echo(f"wrote report to {out}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.Abort:
        sys.exit(1)
    except (click.UsageError, click.ClickException) as e:
        e.show()
        sys.exit(2)
    except PdkernelError as e:
        if isinstance(e, NumericalError):
            click.echo(f"numerical error: {e}", err=True)
            sys.exit(3)
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    except OSError as e:
        click.echo(f"io error: {e}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    sys.exit(main())
