"""Desk-scale driver for the synthetic XOR classification benchmark.

For each seed: draw train/test sets, compute H1 Cech diagrams, tune each
kernel family by stratified cross-validation on the training half, train on
the full training set and score the held-out half.  The report has one row
per (kernel, weight, outer) combination with accuracy mean/std over seeds.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .kernels import (KernelSpec, cross_gram, gram, median_C, median_sigma,
                      median_tau, pssk_median_t)
from .learn import cross_validate, svm_predict, svm_train
from .persistence import cech_diagram
from .synth import synth_sample
from .vectorizers import ArcWeight, OneWeight, PersLinearWeight

C_SVM_GRID = (0.1, 1.0, 10.0, 100.0)
SIGMA_MULTS = (0.5, 1.0, 2.0)
CWEIGHT_MULTS = (0.25, 1.0, 4.0)
T_MULTS = (0.25, 1.0, 4.0)


def _n_processes():
    env = os.environ.get("PDKERNEL_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return 1


def _sample_with_diagram(ss):
    s = synth_sample(ss)
    if s.z1:
        d = cech_diagram(s.cloud, q=1)
    else:
        d = s.s1_diagram  # the cloud is S1 alone; reuse its diagram
    return d, 2 * s.label - 1


def _draw_set(seed_seq, n, processes):
    children = seed_seq.spawn(n)
    if processes > 1:
        with ProcessPoolExecutor(max_workers=processes) as pool:
            results = list(pool.map(_sample_with_diagram, children, chunksize=4))
    else:
        results = [_sample_with_diagram(ss) for ss in children]
    diagrams = [r[0] for r in results]
    labels = np.array([r[1] for r in results], dtype=np.float64)
    return diagrams, labels


def _with_tau(spec, diagrams):
    tau = median_tau(diagrams, spec)
    if not tau > 0:
        tau = 1.0  # degenerate collection; any tau yields a constant kernel
    return replace(spec, tau=tau)


def _family_candidates(train_diagrams):
    """Candidate (spec, C_svm) grids per report row, resolved on train data."""
    med_sig = median_sigma(train_diagrams)
    med_c = median_C(train_diagrams, p=5)
    t_med = pssk_median_t(train_diagrams)
    length = max(float(np.max(d.pairs[:, 1])) for d in train_diagrams if len(d))

    fams = {}

    def kw_specs(weight_factory, outer):
        specs = []
        for sm in SIGMA_MULTS:
            for w in weight_factory(sm):
                base = KernelSpec(family="kw", base="gaussian", sigma=sm * med_sig,
                                  weight=w, outer=outer)
                specs.append(_with_tau(base, train_diagrams) if outer == "gaussian" else base)
        return specs

    arc_weights = lambda _sm: [ArcWeight(cm * med_c, 5) for cm in CWEIGHT_MULTS]
    one_weight = lambda _sm: [OneWeight()]

    fams[("gaussian", "arc_p5", "linear")] = kw_specs(arc_weights, "linear")
    fams[("gaussian", "arc_p5", "gaussian")] = kw_specs(arc_weights, "gaussian")
    fams[("gaussian", "one", "linear")] = kw_specs(one_weight, "linear")
    fams[("gaussian", "one", "gaussian")] = kw_specs(one_weight, "gaussian")
    fams[("pssk", "pss", "linear")] = [
        KernelSpec(family="pssk", t=tm * t_med) for tm in T_MULTS]
    fams[("landscape", "-", "linear")] = [KernelSpec(family="pl")]
    fams[("image20", "pers", "linear")] = [
        KernelSpec(family="pi", grid_size=20, length=length,
                   sigma_img=sm * med_sig, weight=PersLinearWeight(length))
        for sm in SIGMA_MULTS]
    return fams


def run_synth_experiment(base_seed=0, n_seeds=5, n_train=100, n_test=100,
                         folds=10, log=None):
    """Returns report rows: (kernel, weight, outer, mean_acc, std_acc)."""
    processes = _n_processes()
    root = np.random.SeedSequence(base_seed)
    per_family = {}
    for s, seed_i in enumerate(root.spawn(n_seeds)):
        tr_ss, te_ss = seed_i.spawn(2)
        train_d, train_y = _draw_set(tr_ss, n_train, processes)
        test_d, test_y = _draw_set(te_ss, n_test, processes)
        if log:
            log(f"seed {s}: data ready "
                f"(train {int((train_y > 0).sum())}+/{int((train_y < 0).sum())}-)")
        for fam, specs in _family_candidates(train_d).items():
            candidates = [(spec, c) for spec in specs for c in C_SVM_GRID]
            spec, c_svm, _cv = cross_validate(train_d, train_y, candidates,
                                              folds=folds, seed=base_seed + s)
            model = svm_train(gram(train_d, spec), train_y, c_svm)
            pred = svm_predict(model, cross_gram(test_d, train_d, spec))
            acc = float((pred == test_y).mean())
            per_family.setdefault(fam, []).append(acc)
            if log:
                log(f"seed {s}: {'/'.join(fam)} acc={acc:.3f}")
    rows = []
    for fam, accs in per_family.items():
        rows.append((*fam, float(np.mean(accs)), float(np.std(accs))))
    return rows
