"""HTTP service exposing the computation engine.

Every endpoint is a pure request/response computation; the CLI is a thin
client of this app (in-process by default).  Handlers are plain functions so
they can also be called directly.
"""

from __future__ import annotations

import random

from fastapi import FastAPI, HTTPException

from . import exactlinalg, schemas
from .alpha import (alpha, chudnovsky_check, h0_closed_form, h0_computed,
                    initial_sequence, max_equal_run)
from .blowup import (DelPezzoConfig, Exterior, FatPointSpec, LineBundle,
                     NotGeneral, OnExceptional, mult_on_blowup, NotInSystem,
                     sample_exterior_points, sample_general_config)
from .plane import HomogeneousForm, PlanePoint, monomial_basis
from .scenarios import (ALL_CASES, build_scenario, falsify_random,
                        verify_scenario, witness_variants)


def _bad_request(msg: str):
    raise HTTPException(status_code=400, detail=msg)


def _make_config(model: schemas.SurfaceModel) -> DelPezzoConfig:
    if model.base_points is not None:
        if len(model.base_points) != model.r:
            _bad_request(f"expected {model.r} base points, got {len(model.base_points)}")
        try:
            pts = [PlanePoint(*p) for p in model.base_points]
            return DelPezzoConfig.create(pts)
        except (NotGeneral, ValueError) as exc:
            _bad_request(f"base_points: {exc}")
    if model.seed is None:
        _bad_request("seed is required when base_points are not given")
    rng = random.Random(model.seed)
    return sample_general_config(model.r, rng)


def _make_bundle(model, r: int) -> LineBundle:
    if model is None:
        return LineBundle.anticanonical(r)
    if len(model.mults) != r:
        _bad_request(f"bundle has {len(model.mults)} multiplicities for r={r}")
    return LineBundle(model.d, tuple(model.mults))


def _make_z(models, config: DelPezzoConfig, uniform_m=None):
    out = []
    for m in models:
        mult = uniform_m if uniform_m is not None else m.mult
        if isinstance(m, schemas.ExteriorPointModel):
            out.append((Exterior(PlanePoint(*m.exterior)), mult))
        else:
            if m.onE > config.r:
                _bad_request(f"onE={m.onE} exceeds r={config.r}")
            out.append((OnExceptional(m.onE, tuple(m.dir)), mult))
    try:
        return FatPointSpec(tuple(out))
    except ValueError as exc:
        _bad_request(f"z: {exc}")


def _effective_prime(prime, modular: bool):
    if not modular:
        return None
    return prime if prime is not None else exactlinalg.DEFAULT_PRIME


def _surface_echo(config: DelPezzoConfig) -> schemas.SurfaceEcho:
    return schemas.SurfaceEcho(
        r=config.r,
        base_points=[[str(c) for c in p.coords] for p in config.base_points])


def _witness_strs(form):
    return [str(c) for c in form.coeffs] if form is not None else []


def handle_alpha(req: schemas.AlphaRequest) -> schemas.AlphaResponse:
    config = _make_config(req.surface)
    bundle = _make_bundle(req.bundle, config.r)
    fat = _make_z(req.z, config, req.m)
    res = alpha(config, bundle, fat, k_max=req.kmax,
                prime=_effective_prime(req.prime, req.modular))
    return schemas.AlphaResponse(
        surface=_surface_echo(config), value=res.value,
        system_rank=res.system_rank, kernel_dim=res.kernel_dim,
        witness=_witness_strs(res.witness),
        witness_degree=res.value * bundle.d)


def handle_sequence(req: schemas.SequenceRequest) -> schemas.SequenceResponse:
    config = _make_config(req.surface)
    bundle = _make_bundle(req.bundle, config.r)
    fat = _make_z(req.z, config)
    points = [q for q, _ in fat.points]
    seq, results = initial_sequence(
        config, bundle, points, req.m_max, k_max=req.kmax,
        prime=_effective_prime(req.prime, req.modular), want_witness=True)
    entries = [schemas.SequenceEntry(
        m=m, value=r.value, system_rank=r.system_rank, kernel_dim=r.kernel_dim,
        witness=_witness_strs(r.witness), witness_degree=r.value * bundle.d)
        for m, r in enumerate(results, start=1)]
    return schemas.SequenceResponse(
        surface=_surface_echo(config), values=list(seq.values),
        runs=[list(run) for run in seq.runs],
        max_run=list(max_equal_run(seq.values)), entries=entries)


def handle_h0(req: schemas.H0Request) -> schemas.H0Response:
    config = _make_config(req.surface)
    bundle = _make_bundle(req.bundle, config.r)
    computed = h0_computed(config, bundle, req.k,
                           prime=_effective_prime(req.prime, req.modular))
    closed = match = None
    if bundle == LineBundle.anticanonical(config.r):
        closed = h0_closed_form(config.r, req.k)
        match = computed == closed
    return schemas.H0Response(surface=_surface_echo(config), k=req.k,
                              computed=computed, closed_form=closed, match=match)


def handle_chudnovsky(req: schemas.ChudnovskyRequest) -> schemas.ChudnovskyResponse:
    if req.surface.r > 6:
        _bad_request("the bound is stated for r <= 6")
    config = _make_config(req.surface)
    if req.z is not None:
        points = [q for q, _ in _make_z(req.z, config).points]
    else:
        if req.n_points is None or req.surface.seed is None:
            _bad_request("either z, or n_points plus a seed, must be given")
        rng = random.Random(req.surface.seed + 1)
        points = sample_exterior_points(config, req.n_points, rng)
    rep = chudnovsky_check(config, points, req.m_max, k_max=req.kmax,
                           prime=_effective_prime(req.prime, req.modular))
    entries = [schemas.ChudnovskyEntry(m=m, alpha=a, ratio=str(ratio), holds=ok)
               for m, a, ratio, ok in rep.entries]
    return schemas.ChudnovskyResponse(
        surface=_surface_echo(config), alpha1=rep.alpha1,
        hypothesis_holds=rep.hypothesis_holds, bound=str(rep.bound),
        entries=entries, passed=rep.passed)


def handle_verify_theorems(req: schemas.VerifyTheoremsRequest) -> schemas.VerifyTheoremsResponse:
    wanted = None if req.cases is None else set(req.cases)
    known = {cid for _, cid in ALL_CASES}
    if wanted is not None and not wanted <= known:
        _bad_request(f"unknown cases: {sorted(wanted - known)}")
    prime = _effective_prime(req.prime, req.modular)
    results = []
    for r, cid in ALL_CASES:
        if wanted is not None and cid not in wanted:
            continue
        w = build_scenario(r, cid)
        for v in witness_variants(w):
            rep = verify_scenario(v, k_max=req.kmax, prime=prime)
            results.append(schemas.ScenarioCaseResult(
                id=rep.id, values=list(rep.values),
                expected_prefix=list(rep.expected_prefix),
                expected_next=rep.expected_next, passed=rep.passed))
    results.sort(key=lambda c: c.id)
    return schemas.VerifyTheoremsResponse(
        cases=results, passed=all(c.passed for c in results))


def handle_falsify(req: schemas.FalsifyRequest) -> schemas.FalsifyResponse:
    r = {"S1.triple": 1, "S6.nonconcurrent": 6, "S8.generic": 8}[req.family]
    rep = falsify_random(r, req.family, req.trials, req.seed,
                         prime=_effective_prime(req.prime, req.modular))
    return schemas.FalsifyResponse(
        family=rep.family, trials=rep.trials, seed=rep.seed,
        failures=[i for i, ok in rep.outcomes if not ok], passed=rep.passed)


def handle_check_witness(req: schemas.CheckWitnessRequest) -> schemas.CheckWitnessResponse:
    config = _make_config(req.surface)
    bundle = _make_bundle(req.bundle, config.r)
    fat = _make_z(req.z, config, req.m)
    degree = req.k * bundle.d
    if len(req.witness) != len(monomial_basis(degree)):
        _bad_request(f"witness needs {len(monomial_basis(degree))} coefficients "
                     f"for degree {degree}")
    form = HomogeneousForm(degree, req.witness)
    if form.is_zero():
        _bad_request("the zero form is not a witness")
    results = []
    ok_all = True
    for q, m in fat.points:
        try:
            data = mult_on_blowup(config, bundle, req.k, form, q)
            total, ok = data.total_mult_at_q, data.total_mult_at_q >= m
        except NotInSystem:
            total, ok = -1, False
        results.append(schemas.CheckWitnessPointResult(
            point=repr(q), demanded=m, total_mult=total, ok=ok))
        ok_all = ok_all and ok
    return schemas.CheckWitnessResponse(
        surface=_surface_echo(config), degree=degree, points=results,
        passed=ok_all)


def create_app() -> FastAPI:
    app = FastAPI(title="delpezzo",
                  description="Exact initial degrees of fat-point subschemes "
                              "on blow-ups of the plane")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/alpha", response_model=schemas.AlphaResponse)
    def alpha_route(req: schemas.AlphaRequest):
        return handle_alpha(req)

    @app.post("/sequence", response_model=schemas.SequenceResponse)
    def sequence_route(req: schemas.SequenceRequest):
        return handle_sequence(req)

    @app.post("/h0", response_model=schemas.H0Response)
    def h0_route(req: schemas.H0Request):
        return handle_h0(req)

    @app.post("/chudnovsky", response_model=schemas.ChudnovskyResponse)
    def chudnovsky_route(req: schemas.ChudnovskyRequest):
        return handle_chudnovsky(req)

    @app.post("/verify-theorems", response_model=schemas.VerifyTheoremsResponse)
    def verify_route(req: schemas.VerifyTheoremsRequest):
        return handle_verify_theorems(req)

    @app.post("/falsify", response_model=schemas.FalsifyResponse)
    def falsify_route(req: schemas.FalsifyRequest):
        return handle_falsify(req)

    @app.post("/check-witness", response_model=schemas.CheckWitnessResponse)
    def check_witness_route(req: schemas.CheckWitnessRequest):
        return handle_check_witness(req)

    return app


app = create_app()
