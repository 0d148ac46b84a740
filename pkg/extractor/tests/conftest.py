import pytest

VOCAB = (
    ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    + list("abcdefghijklmnopqrstuvwxyz'")
    + ["##" + c for c in "abcdefghijklmnopqrstuvwxyz'"]
    + [".", ",", "!", "?"]
)

# two word pairs, each judged in two contexts, targets marked inline
DATASET = """\
id\tword1\tword2\tcontext1\tcontext2
b1\tcell\troom\tHer prison <strong>cell</strong> was almost an improvement over her <strong>room</strong> at the last hostel.\tHis job as a biologist didn't leave much <strong>room</strong> for a personal life. He knew much more about the human <strong>cell</strong> than about human feelings.
b2\tbutter\tcream\tShe poured the warm <strong>butter</strong> over the thick <strong>cream</strong>.\tThe <strong>butter</strong> keeps next to the <strong>cream</strong> in the cold pantry.
"""


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """Small random-weight WordPiece BERT saved locally.

    Stands in for a public checkpoint: the hub is unreachable in this
    environment, and the extractor contract does not depend on trained
    weights.
    """
    import torch
    from tokenizers import Tokenizer, decoders, models, normalizers, pre_tokenizers, processors
    from transformers import BertConfig, BertModel, BertTokenizerFast

    path = tmp_path_factory.mktemp("tiny-bert")
    vocab = {word: i for i, word in enumerate(VOCAB)}
    backend = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]"))
    backend.normalizer = normalizers.BertNormalizer(lowercase=True)
    backend.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    backend.post_processor = processors.BertProcessing(
        sep=("[SEP]", vocab["[SEP]"]), cls=("[CLS]", vocab["[CLS]"])
    )
    backend.decoder = decoders.WordPiece()
    tokenizer = BertTokenizerFast(
        tokenizer_object=backend,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    tokenizer.save_pretrained(path)
    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=512,
    )
    BertModel(config).save_pretrained(path)
    return str(path)


@pytest.fixture()
def dataset_file(tmp_path):
    path = tmp_path / "pairs.tsv"
    path.write_text(DATASET, encoding="utf-8")
    return str(path)
