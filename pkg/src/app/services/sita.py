"""
Iterative protection: minimize lambda * L_destyle + L_per over the pixels of X_adv.

Constraint modes:
    sita    Adam on the full objective, structure perception term as the only noise control
    l2      Adam with the perception term replaced by the pixel MSE, learning rate l2_lr
    budget  signed-gradient steps of size alpha on lambda * L_destyle, projected to an L-inf ball
"""
import logging
import time

import torch

from constant import START_JITTER
from src.domain import AttackConfig, AttackResult, DivergedError, ImageTensor, InvalidInputError, InvalidParameterError
from .encoder import ImageEncoder
from .imaging import content_tensor
from .losses import LossTerms, compute_terms, destyle_from_embeddings

logger = logging.getLogger(__name__)


def _start_point(x_s: torch.Tensor, cfg: AttackConfig) -> torch.Tensor:
    """
    X_s plus seeded uniform noise of amplitude START_JITTER, clamped to [0, 1].

    Every destylization mode is stationary at X_adv = X_s (cosine at its maximum,
    L1 terms at their kink), so the first gradient is zero without this.
    """
    generator = torch.Generator(device="cpu").manual_seed(cfg.seed)
    noise = torch.rand(x_s.shape, generator=generator, dtype=torch.float64) * 2.0 - 1.0
    x = x_s + (START_JITTER * noise).to(dtype=x_s.dtype, device=x_s.device)
    return x.clamp(0.0, 1.0)


def run_sita(x_s: ImageTensor, cfg: AttackConfig, enc: ImageEncoder) -> AttackResult:
    """
    Produce a protected image for x_s.

    Args:
        x_s: pixel-valued RGB style reference
        cfg: attack configuration; cfg.encoder_variant must match enc
        enc: frozen encoder used as the surrogate

    Returns:
        AttackResult whose loss_trace has effective_steps + 1 entries, the first
        measured at X_adv = X_s

    Raises:
        InvalidInputError, DegenerateStyleError, DivergedError
    """
    x_s.require_rgb("run_sita")
    if not x_s.is_pixel_valued():
        raise InvalidInputError("run_sita expects a pixel-valued image in [0, 1]")
    if enc.variant.id != cfg.encoder_variant:
        raise InvalidParameterError(
            f"Encoder '{enc.variant.id}' does not match the configured variant '{cfg.encoder_variant}'"
        )

    started = time.perf_counter()
    steps = cfg.effective_steps
    lambda_ = cfg.lambda_
    pixel_mse = cfg.constraint_mode == "l2"
    logger.info(
        f"Protecting image {x_s.shape}: mode={cfg.constraint_mode}/{cfg.destyle_mode}, "
        f"lambda={lambda_}, steps={steps}, lr={cfg.effective_lr}, seed={cfg.seed}"
    )

    source = x_s.data.detach().to(enc.device)
    with torch.no_grad():
        x_c = content_tensor(source, cfg.blur_sigma, cfg.use_gray, cfg.use_blur)
        e_s = enc.embed_tensor(source)
        e_c = enc.embed_tensor(x_c)
        # Fails early with DegenerateStyleError when D_S_clean vanishes
        destyle_from_embeddings(e_s, e_s, e_c, cfg.destyle_mode)

    def evaluate(x: torch.Tensor) -> LossTerms:
        e_adv = enc.embed_tensor(x)
        return compute_terms(
            e_adv,
            e_s,
            e_c,
            x - source,
            lambda_,
            cfg.destyle_mode,
            use_homo=cfg.use_homo,
            use_stru=cfg.use_stru,
            pixel_mse=pixel_mse,
        )

    def check_finite(terms: LossTerms, step: int) -> None:
        if not bool(torch.isfinite(terms.total)):
            raise DivergedError(step)

    with torch.no_grad():
        initial = evaluate(source)
    check_finite(initial, 0)
    trace = [initial.breakdown(lambda_)]

    if steps == 0:
        return AttackResult(
            x_adv=x_s.with_data(x_s.data.detach().clone()),
            loss_trace=trace,
            elapsed=time.perf_counter() - started,
            config=cfg,
        )

    x = _start_point(source, cfg).requires_grad_(True)
    optimizer = None
    if cfg.constraint_mode != "budget":
        optimizer = torch.optim.Adam(
            [x], lr=cfg.effective_lr, betas=(cfg.beta1, cfg.beta2), eps=cfg.adam_eps
        )
    max_linf = 0.0

    for step in range(steps):
        terms = evaluate(x)
        check_finite(terms, step)
        if step > 0:
            trace.append(terms.breakdown(lambda_))
            logger.debug(
                f"step {step}/{steps}: total={trace[-1].total:.6f} destyle={trace[-1].destyle:.6f} "
                f"per={trace[-1].per:.6f}"
            )

        if optimizer is not None:
            optimizer.zero_grad(set_to_none=True)
            terms.total.backward()
            optimizer.step()
            with torch.no_grad():
                if cfg.clamp_every_step:
                    x.clamp_(0.0, 1.0)
        else:
            objective = lambda_ * terms.destyle
            (grad,) = torch.autograd.grad(objective, x)
            with torch.no_grad():
                x.sub_(cfg.budget_alpha * grad.sign())
                x.copy_(torch.max(torch.min(x, source + cfg.budget_eps), source - cfg.budget_eps))
                x.clamp_(0.0, 1.0)

        with torch.no_grad():
            max_linf = max(max_linf, float((x - source).abs().max()))

    with torch.no_grad():
        x.clamp_(0.0, 1.0)
        final = evaluate(x)
    check_finite(final, steps)
    trace.append(final.breakdown(lambda_))

    elapsed = time.perf_counter() - started
    logger.info(
        f"Protection finished in {elapsed:.2f}s: total {trace[0].total:.6f} -> {trace[-1].total:.6f}, "
        f"destyle {trace[0].destyle:.6f} -> {trace[-1].destyle:.6f}"
    )
    x_adv = x.detach().to(x_s.data.device, dtype=x_s.data.dtype)
    return AttackResult(x_adv=x_s.with_data(x_adv), loss_trace=trace, elapsed=elapsed, config=cfg, max_linf=max_linf)
