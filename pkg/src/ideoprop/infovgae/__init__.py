from .controller import PiController, pi_update
from .discriminator import Discriminator, disc_step, permute_dims, tc_loss
from .model import (DegenerateGraphError, EncoderParams, anchor_penalty, decode, encode,
                    kl_term, recon_loss, reparameterize)
from .train import LatentState, TrainConfig, TrainingError, full_loss, train

__all__ = [
    "PiController", "pi_update", "Discriminator", "disc_step", "permute_dims", "tc_loss",
    "DegenerateGraphError", "EncoderParams", "anchor_penalty", "decode", "encode", "kl_term",
    "recon_loss", "reparameterize", "LatentState", "TrainConfig", "TrainingError",
    "full_loss", "train",
]
