"""Optional Hugging Face encoder adapter (requires the ``hf`` extra)."""

from __future__ import annotations

from typing import Sequence

from figlang.geom.encoders import EncoderAdapter
from figlang.geom.pooling import TokenEmbeddings


class HFEncoderAdapter(EncoderAdapter):
    """Wraps a transformers AutoModel as a token-embedding encoder.

    Evaluation-only: pooled vectors come from the last hidden state with the
    tokenizer's attention mask. Install with ``pip install figlang[hf]``.
    """

    def __init__(self, model_name: str, device: str = "cpu", max_length: int = 256) -> None:
        try:
            import torch  # noqa: F401
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:  # pragma: no cover - depends on extras
            raise ImportError("HFEncoderAdapter requires the [hf] extra: pip install figlang[hf]") from exc
        self.name = f"hf:{model_name}"
        self.device = device
        self.max_length = max_length
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name).to(device).eval()

    def encode(self, texts: Sequence[str]) -> list[TokenEmbeddings]:  # pragma: no cover
        import torch

        encoded = self.tokenizer(
            list(texts),
            padding=True,
            truncation=True,
            max_length=self.max_length,
            return_tensors="pt",
        ).to(self.device)
        with torch.no_grad():
            hidden = self.model(**encoded).last_hidden_state.cpu().numpy()
        masks = encoded["attention_mask"].cpu().numpy().astype(bool)
        return [TokenEmbeddings(hidden[i], masks[i]) for i in range(len(texts))]
