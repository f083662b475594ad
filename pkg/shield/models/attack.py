from enum import StrEnum

from pydantic import BaseModel, Field, model_validator


class DiscriminatorLossForm(StrEnum):
    """Discriminator objective variants"""

    STANDARD = "standard"  # -log D(real) - log(1 - D(attacked))
    AS_PRINTED = "as_printed"  # log(1 - D(real)) + log(1 - D(attacked))


class AttackLossReport(BaseModel):
    """Loss components of one attack training step"""

    epoch: int = Field(ge=0)
    step: int = Field(ge=0)
    p_loss: float = Field(ge=0.0, description="Point-wise L1 distortion")
    a_loss: float = Field(description="Adversarial term log(1 - D(attacked))")
    s_loss: float = Field(ge=0.0, description="Mean surrogate cross-entropy")
    g_loss: float = Field(description="Combined generator objective")
    d_loss: float = Field(description="Discriminator objective")

    @model_validator(mode="before")
    @classmethod
    def _fill_g_loss(cls, data):
        if isinstance(data, dict) and data.get("g_loss") is None:
            data = dict(data)
            data["g_loss"] = data["p_loss"] + data["a_loss"] + data["s_loss"]
        return data


class LossWeights(BaseModel):
    """Weights of the generator objective terms"""

    perceptual: float = Field(default=1.0, ge=0.0)
    adversarial: float = Field(default=1.0, ge=0.0)
    surrogate: float = Field(default=1.0, ge=0.0)
