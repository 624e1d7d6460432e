"""Built-in Bibracte / PACTOLS 2 fixture corpus.

``paper_store`` builds the documented ceramic subgraph: the five-concept
description chain (forme, type, catégorie, chronologie, référentiel) around
the A15 plate, every neighbor those concepts name, and a small PACTOLS 2
extract to align against. ``full_store`` extends it with synthetic filler
until the referential reaches its published size: 53 catégories, 25 formes
and 423 types, giving the 22 419 combination ceiling.

The Turtle fixture shipped in ``data/bibracte.ttl`` is the canonical
serialization of ``paper_store``.
"""

from __future__ import annotations

import random
from importlib import resources

from .align import create_grouping_concept
from .model import Definition, Label, Profile
from .referential import register_referential, role_counts
from .store import ThesaurusStore

BIBLIO_KEY = "Barrier, Luginbühl 2021"
SUFFIX = " (BARRIER, LUGINBÜHL 2021)"
REF_ID = "bl2021"

SCHEME_BIBRACTE = "bibracte"
SCHEME_PACTOLS = "pactols2"

ARK_FORME_ASSIETTE = "ark:/39676/bib25gwqwnprh"
ARK_TYPE_A15 = "ark:/39676/bibxtjgnrpk5"
ARK_CAT_PGFINLF = "ark:/39676/bibrbqbp0019d"
ARK_CHRONO_ETAPE1 = "ark:/39676/bib2q5s0bw54c"
ARK_REF_VAISSELLE = "ark:/39676/bibd9q291x45d"

LABEL_TYPE_A15 = "assiette A15" + SUFFIX
LABEL_FORME_ASSIETTE = "assiette" + SUFFIX
LABEL_CAT_PGFINLF = "PGFINLF" + SUFFIX
LABEL_CHRONO_ETAPE1 = "Étape 1 céramique : 120/110 à 90/80 av. n.è." + SUFFIX
LABEL_REF_VAISSELLE = "vaisselle céramique" + SUFFIX
LABEL_PERIODISATION = "périodisation BARRIER, LUGINBÜHL 2021"

NAKALA = "https://api.nakala.fr/data/10.34847/nkl.89b20d19/"

DEF_FORME_ASSIETTE = (
    "Forme basse, ouverte, de hauteur inférieure au quart du diamètre. Diamètre "
    "compris entre 15 et 25 cm. Pied annulaire. Catégories : importations, "
    "céramiques de tradition méditerranéenne et céramiques fines régionales. "
    "Origine culturelle : méditerranéenne. Fonctions présumées : servir et "
    "présenter les aliments. (Source : Barrier, Luginbühl 2021)"
)

DEF_TYPE_A15 = (
    "Plat à paroi concave, lèvre arrondie épaissie en bandeau. Imitation de "
    "R-Pomp 1 (plat à engobe interne italien). (Source : Barrier, Luginbühl 2021)."
)

DEF_CAT_PGFINLF = (
    "Céramique à pâte grise fine et surface lissée fumigée. Surface : Parois "
    "lissées, assez ou peu luisantes (sauf intérieur des formes fermées), gris "
    "foncé ou noirs. Types de décors variés (imprimés, imprimés à la molette, "
    "polis). Pâte : Siliceuse, fine, dure, gris moyen. Montage : Tournage et "
    "tournassage. Répertoire : Vaisselle de table et de stockage d'appoint. "
    "Assiettes, plats, écuelles, coupes, bols, gobelets, pots, bouteilles, "
    "tonnelets, rares cruches. Origine : Régionale. Chronologie : Production "
    "probable dès avant 120 av. n. è. jusqu'au début du Ier s. de n. è. "
    "(Source : Barrier, Luginbühl 2021)"
)

DEF_CHRONO_ETAPE1 = (
    "Marqueurs de la céramique :\n"
    "- Importations méditerranéennes principalement représentées par des "
    "campaniennes A et B, ainsi que des gobelets italiens à parois fines "
    "(Mayet I et II). Rares bols hellénistiques à reliefs.\n"
    "- Productions d'influence méditerranéenne constituées de cruches à col "
    "large (Gaule méridionale ou rhodanienne) et d'imitations de pichets de "
    "type ampuritan (Auvergne septentrionale ?).\n"
    "- Faciès des fines régionales caractérisé par des bouteilles peintes à "
    "fond blanc et décor de cervidés, des tonnelets peints à fond lie-de-vin, "
    "parfois orné de pastilles en réserve, ainsi que des productions « grises "
    "fines » diversifiées (groupes à surface brune, à cœur rouge, à surface "
    "lustrée et à surface lissée fumigée).\n"
    "- Productions mi-fines encore rares (proportions aux alentours de 10 %), "
    "alors que les grossières constituent entre environ 40 % et 50 % des "
    "ensembles. (Source : Barrier, Luginbühl 2021)"
)

DEF_REF_VAISSELLE = (
    "Ce référentiel est dérivé de la publication suivante : BARRIER (S.), "
    "LUGINBÜHL (T.), BARRAL (P.) coll. — La vaisselle céramique de Bibracte. "
    "De l'identification à l'analyse. Glux-en-Glenne : Bibracte, 2021. "
    "(Bibracte, 31 ; ISSN : 1281-430X ; ISBN : 978-2-490601-07-3), 318 pages, "
    "177 illustrations.\n\n"
    "Premier élément date et référence bibliographique : Barrier, Luginbühl "
    "2021 : Barrier (S.), Luginbühl (T.) — La vaisselle céramique de Bibracte. "
    "De l'identification à l'analyse. Glux-en-Glenne : Bibracte, 2021. 318 p., "
    "177 ill. (Bibracte ; 31).\n\n"
    "Mots-clés de l'ouvrage (termes sélectionnés sur PACTOLS 2, thésaurus "
    "accessible en 2022) : Celtes ; Eduens ; Bibracte ; céramique (matériau) ; "
    "vaisselle ; La Tène ; IIe siècle av. J.-C. ; 1er siècle av. J.-C. ; "
    "1er siècle ; récipient ; vie quotidienne ; alimentation ; artisanat"
)

DEF_CAT_CAMPA = (
    "Céramique à vernis noir campanienne A. Surface : Vernis noir, luisant "
    "(parfois légèrement métallescent), adhérent bien. Pâte : Calcaire, fine, "
    "dure, rose saumon. Montage : Tournage et tournassage. Répertoire : "
    "Vaisselle de table. Assiettes, plats, coupes et bols principalement. "
    "Origine : Campanie. Chronologie : Catégorie surtout caractéristique du "
    "IIe s. av. n. è., dont la production chute dès le début du siècle "
    "suivant. (Source : Barrier, Luginbühl 2021)"
)

DEF_PACTOLS_ASSIETTE = (
    "Récipient ouvert à parois fortement évasées dont le diamètre à "
    "l'ouverture (inférieur ou égal à 23/24 cm environ) est égal ou supérieur "
    "à cinq fois la hauteur (Balfet et al. 1989, p. 10). Récipient de forme "
    "générale très évasée avec un large marli et une base légèrement marquée, "
    "dont le diamètre d'ouverture est supérieur à 5 fois la hauteur "
    "(ICÉRAMM 2021)"
)

REF_KEYWORDS = [
    "Celtes", "Eduens", "Bibracte", "céramique (matériau)", "vaisselle",
    "La Tène", "IIe siècle av. J.-C.", "1er siècle av. J.-C.", "1er siècle",
    "récipient", "vie quotidienne", "alimentation", "artisanat",
]

# the 27 categories the Étape 1 chronology concept is associated with
ETAPE1_CATEGORIES = [
    "CAMPA", "CAMPB", "MICACB", "MICACBCN", "MICACFIN", "MICACG", "MICACGCN",
    "MODGROS", "PARFINA", "PARFINC", "PCCRUC", "PCCRUCENG", "PCGROS",
    "PCGROSCN", "PCLUSTR", "PCMIFIN", "PEINTA", "PEINTB", "PEINTC", "PGCAT",
    "PGFINLF", "PGLUSTR", "PGMIFIN", "PSFINA", "PSFINB", "PSGROS", "VRHELLEN",
]

# sibling plate types associated with PGFINLF
A15_SIBLING_TYPES = [
    "assiette A1", "assiette A10", "assiette A10a", "assiette A10b",
    "assiette A11", "assiette A11a", "assiette A11b",
]

ALT_LABELS_A15 = ["A15", "plat A15", "plat à paroi concave et lèvre arrondie épaissie en bandeau"]

CHEMIN_PREFIX = (
    "Bibracte_Thesaurus > 3 - mobilier > artefacts > céramique (mobilier) > "
    "récipients en céramique > céramique période oppidum > vaisselle période oppidum > "
    "vaisselle (BARRIER, LUGINBÜHL 2021)"
)

CHEMIN_FORME = f"{CHEMIN_PREFIX} > formes (BARRIER, LUGINBÜHL 2021) > assiette (BARRIER, LUGINBÜHL 2021)"
CHEMIN_TYPE = (
    f"{CHEMIN_PREFIX} > types (BARRIER, LUGINBÜHL 2021) > "
    "types assiettes (BARRIER, LUGINBÜHL 2021) > assiette A15 (BARRIER, LUGINBÜHL 2021)"
)
CHEMIN_CATEGORIE = (
    f"{CHEMIN_PREFIX} > catégories (BARRIER, LUGINBÜHL 2021) > "
    "céramique tournée (BARRIER, LUGINBÜHL 2021) > "
    "céramique tournée lissée (BARRIER, LUGINBÜHL 2021) > "
    "céramique tournée lissée à pâte sombre/grise (BARRIER, LUGINBÜHL 2021) > "
    "PGFINLF (BARRIER, LUGINBÜHL 2021)"
)
CHEMIN_CHRONO = (
    "Bibracte_Thesaurus > 4 - chronologie > périodisation BARRIER, LUGINBÜHL 2021 > "
    "Étape 1 céramique : 120/110 à 90/80 av. n.è. (BARRIER, LUGINBÜHL 2021)"
)
CHEMIN_REF = "Bibracte_Thesaurus > 5 - référentiels > vaisselle céramique (BARRIER, LUGINBÜHL 2021)"

PAPER_PATHS = {
    ARK_FORME_ASSIETTE: CHEMIN_FORME,
    ARK_TYPE_A15: CHEMIN_TYPE,
    ARK_CAT_PGFINLF: CHEMIN_CATEGORIE,
    ARK_CHRONO_ETAPE1: CHEMIN_CHRONO,
    ARK_REF_VAISSELLE: CHEMIN_REF,
}

# forms of the full referential; tonnelet and vase bobine are named by the
# corpus (their types-branches appear among PGFINLF's associations)
FULL_FORMS = [
    "assiette", "amphore", "bol", "bouteille", "coupe", "coupelle",
    "couvercle", "cruche", "dolium", "écuelle", "faisselle", "gobelet",
    "jatte", "lampe", "marmite", "mortier", "passoire", "pichet", "plat",
    "pot", "tasse", "tonnelet", "urne", "vase balustre", "vase bobine",
]


def _plural(form: str) -> str:
    head, _, rest = form.partition(" ")
    head = head if head.endswith("s") else head + "s"
    return f"{head} {rest}".strip()


def types_group_label(form: str) -> str:
    """Branch label grouping the types of one form, e.g. "types assiettes"."""
    return f"types {_plural(form)}{SUFFIX}"


class _Builder:
    def __init__(self, store: ThesaurusStore, scheme: str, default_source: str):
        self.store = store
        self.scheme = scheme
        self.default_source = default_source
        self.by_label: dict[str, str] = {}

    def add(self, label, parent=None, definition=None, sources=None, resources=None, ark=None, top=False):
        if definition is None and sources is None:
            d = None
        else:
            d = Definition(
                text=definition or f"Concept de l'arborescence : {label}.",
                sources=list(sources) if sources is not None else [self.default_source],
                external_resources=list(resources or []),
            )
        cid = self.store.add_concept(self.scheme, Label(lang="fr", text=label), d, ark=ark)
        self.by_label[label] = cid
        if parent is not None:
            self.store.add_hierarchical_relation(self.by_label[parent], cid)
        if top:
            self.store.add_top_concept(self.scheme, cid)
        return cid

    def relate(self, a_label: str, b_label: str) -> None:
        self.store.add_associative_relation(self.by_label[a_label], self.by_label[b_label])


def paper_store() -> ThesaurusStore:
    """The documented subgraph: two schemes, the five-concept chain, all named
    neighbors, and the registered bl2021 referential."""
    store = ThesaurusStore(naan="39676", prefix="bib", seed=2021, default_lang="fr")
    store.add_scheme(SCHEME_BIBRACTE, "Bibracte_Thesaurus", Profile.RESEARCH,
                     resolver_base="https://ark.mom.fr/")
    store.add_scheme(SCHEME_PACTOLS, "PACTOLS 2", Profile.DOCUMENTARY,
                     resolver_base="https://pactols.frantiq.fr/")

    b = _Builder(store, SCHEME_BIBRACTE, BIBLIO_KEY)
    structural = "Bibracte 2022"

    b.add("Bibracte_Thesaurus", top=True,
          definition="Racine du thésaurus de travail de Bibracte.", sources=[structural])
    b.add("3 - mobilier", "Bibracte_Thesaurus",
          definition="Branche du mobilier archéologique.", sources=[structural])
    b.add("artefacts", "3 - mobilier",
          definition="Objets façonnés recueillis en fouille.", sources=[structural])
    b.add("céramique (mobilier)", "artefacts",
          definition="Mobilier céramique, toutes périodes confondues.", sources=[structural])
    b.add("récipients en céramique", "céramique (mobilier)",
          definition="Récipients en terre cuite.", sources=[structural])
    b.add("céramique période oppidum", "récipients en céramique",
          definition="Céramique de la période d'occupation de l'oppidum.", sources=[structural])
    b.add("vaisselle période oppidum", "céramique période oppidum",
          definition="Vaisselle de la période d'occupation de l'oppidum.", sources=[structural])

    b.add("vaisselle" + SUFFIX, "vaisselle période oppidum",
          definition="Vaisselle céramique répertoriée par le référentiel.")
    b.add("formes" + SUFFIX, "vaisselle" + SUFFIX,
          definition="Formes de la vaisselle céramique.")
    b.add("types" + SUFFIX, "vaisselle" + SUFFIX,
          definition="Types morpho-chronologiques de la vaisselle céramique.")
    b.add("catégories" + SUFFIX, "vaisselle" + SUFFIX,
          definition="Catégories techniques de la vaisselle céramique.")

    # Concept: forme assiette
    b.add(LABEL_FORME_ASSIETTE, "formes" + SUFFIX,
          definition=DEF_FORME_ASSIETTE,
          resources=[NAKALA + "db80f98eb18efa07e04bc7287de8926fa5e8cca9"],
          ark=ARK_FORME_ASSIETTE)

    # types branches named by the corpus
    b.add("types assiettes" + SUFFIX, "types" + SUFFIX,
          definition="Types rattachés à la forme assiette.")
    b.add("types tonnelets" + SUFFIX, "types" + SUFFIX,
          definition="Types rattachés à la forme tonnelet.")
    b.add("types vases bobine" + SUFFIX, "types" + SUFFIX,
          definition="Types rattachés à la forme vase bobine.")

    # Concept: type assiette A15 and the sibling types PGFINLF is linked to
    b.add(LABEL_TYPE_A15, "types assiettes" + SUFFIX,
          definition=DEF_TYPE_A15,
          resources=[NAKALA + "b6f784626ed44f0443a5fa62e78b7759a0b1a4f6"],
          ark=ARK_TYPE_A15)
    for lb in ALT_LABELS_A15:
        store.add_alt_label(ARK_TYPE_A15, Label(lang="fr", text=lb))
    for sibling in A15_SIBLING_TYPES:
        b.add(sibling + SUFFIX, "types assiettes" + SUFFIX,
              definition=f"Type {sibling} de la classification morpho-typologique.")

    # categories: the PGFINLF chain plus every category named elsewhere
    b.add("céramique tournée" + SUFFIX, "catégories" + SUFFIX,
          definition="Céramique montée au tour.")
    b.add("céramique tournée lissée" + SUFFIX, "céramique tournée" + SUFFIX,
          definition="Céramique tournée à surface lissée.")
    b.add("céramique tournée lissée à pâte sombre/grise" + SUFFIX,
          "céramique tournée lissée" + SUFFIX,
          definition="Céramique tournée lissée à pâte sombre ou grise.")
    b.add(LABEL_CAT_PGFINLF, "céramique tournée lissée à pâte sombre/grise" + SUFFIX,
          definition=DEF_CAT_PGFINLF,
          resources=[
              NAKALA + "07095a124e9f88122f9b4b064a7c728fd580cf45",
              NAKALA + "1aece1d1e44acbbb6de6d17aebe1cb7131eb0d7e",
          ],
          ark=ARK_CAT_PGFINLF)
    store.add_alt_label(ARK_CAT_PGFINLF,
                        Label(lang="fr", text="céramique à pâte grise fine et surface lissée fumigée"))

    for code in ETAPE1_CATEGORIES:
        if code == "PGFINLF":
            continue
        definition = DEF_CAT_CAMPA if code == "CAMPA" else f"Catégorie technique {code} du répertoire céramique."
        b.add(code + SUFFIX, "catégories" + SUFFIX, definition=definition)
    store.add_alt_label(b.by_label["CAMPA" + SUFFIX],
                        Label(lang="fr", text="céramique à vernis noir campanienne A"))
    for code in ("EIRA", "PGFINTN"):
        b.add(code + SUFFIX, "catégories" + SUFFIX,
              definition=f"Catégorie technique {code} du répertoire céramique.")

    # chronology branch
    b.add("4 - chronologie", "Bibracte_Thesaurus",
          definition="Branche chronologique.", sources=[structural])
    b.add(LABEL_PERIODISATION, "4 - chronologie",
          definition="Périodisation de la céramique de l'oppidum.")
    b.add(LABEL_CHRONO_ETAPE1, LABEL_PERIODISATION,
          definition=DEF_CHRONO_ETAPE1, ark=ARK_CHRONO_ETAPE1)

    # referential branch
    b.add("5 - référentiels", "Bibracte_Thesaurus",
          definition="Branche des référentiels millésimés.", sources=[structural])
    b.add(LABEL_REF_VAISSELLE, "5 - référentiels",
          definition=DEF_REF_VAISSELLE, ark=ARK_REF_VAISSELLE)
    b.add("bibliographie" + SUFFIX, LABEL_REF_VAISSELLE,
          definition="Référence bibliographique détaillée du référentiel.")

    # grouping term created for alignment; associated with PGFINLF
    grouping = create_grouping_concept(store, SCHEME_BIBRACTE, "céramique à pâte grise", [])
    b.by_label["[céramique à pâte grise]"] = grouping

    # associative relations named by the corpus
    b.relate(LABEL_FORME_ASSIETTE, "types assiettes" + SUFFIX)
    for code in ("EIRA", "PGFINLF", "PGFINTN"):
        b.relate(LABEL_TYPE_A15, code + SUFFIX)
    for sibling in A15_SIBLING_TYPES:
        b.relate(LABEL_CAT_PGFINLF, sibling + SUFFIX)
    b.relate(LABEL_CAT_PGFINLF, "types tonnelets" + SUFFIX)
    b.relate(LABEL_CAT_PGFINLF, "types vases bobine" + SUFFIX)
    b.relate(LABEL_CAT_PGFINLF, "[céramique à pâte grise]")
    for code in ETAPE1_CATEGORIES:
        b.relate(LABEL_CHRONO_ETAPE1, code + SUFFIX)
    for head in ("catégories" + SUFFIX, LABEL_PERIODISATION, "types" + SUFFIX, "vaisselle" + SUFFIX):
        b.relate(LABEL_REF_VAISSELLE, head)

    # PACTOLS 2 extract
    p = _Builder(store, SCHEME_PACTOLS, "PACTOLS 2022")
    p.add("Sujets", top=True)
    p.add("céramique", "Sujets")
    p.add("assiette", "céramique",
          definition=DEF_PACTOLS_ASSIETTE, sources=["Balfet et al. 1989", "ICÉRAMM 2021"])
    p.add("céramique campanienne A", "céramique")
    p.add("céramique à pâte grise", "céramique")
    p.add("Chronologie", top=True)
    p.add("IIe siècle av. J.-C.", "Chronologie")
    p.add("Ier siècle av. J.-C.", "Chronologie")

    register_referential(
        store, SCHEME_BIBRACTE, ARK_REF_VAISSELLE, BIBLIO_KEY, 2021,
        ref_id=REF_ID, keywords=REF_KEYWORDS,
    )
    return store


def full_store() -> ThesaurusStore:
    """Paper subgraph filled out to the published referential size
    (53 catégories, 25 formes, 423 types)."""
    store = paper_store()
    b = _Builder(store, SCHEME_BIBRACTE, BIBLIO_KEY)
    b.by_label = {store.label_of(c.id): c.id for c in store.concepts_in_scheme(SCHEME_BIBRACTE)}

    for form in FULL_FORMS:
        if form == "assiette":
            continue
        b.add(form + SUFFIX, "formes" + SUFFIX,
              definition=f"Forme {form} de la vaisselle céramique.")
        group = types_group_label(form)
        if group not in b.by_label:
            b.add(group, "types" + SUFFIX,
                  definition=f"Types rattachés à la forme {form}.")
        b.relate(form + SUFFIX, group)

    # categories: 29 documented -> add filler up to 53
    categories = [c + SUFFIX for c in ETAPE1_CATEGORIES] + ["EIRA" + SUFFIX, "PGFINTN" + SUFFIX]
    for i in range(1, 25):
        code = f"CAT{i:02d}"
        b.add(code + SUFFIX, "catégories" + SUFFIX,
              definition=f"Catégorie technique {code} du répertoire céramique.")
        categories.append(code + SUFFIX)

    # types: 8 documented plate types -> add filler up to 423, spread over forms
    rng = random.Random(20211231)
    existing_types = 8
    target = 423
    remaining = target - existing_types
    per_form = [remaining // len(FULL_FORMS)] * len(FULL_FORMS)
    for i in range(remaining - sum(per_form)):
        per_form[i] += 1
    for form, count in zip(FULL_FORMS, per_form):
        group = types_group_label(form)
        for i in range(1, count + 1):
            label = f"{form} T{i}{SUFFIX}"
            cid = b.add(label, group, definition=f"Type {form} T{i} de la classification.")
            for cat_label in rng.sample(sorted(categories), rng.randint(2, 4)):
                store.add_associative_relation(cid, b.by_label[cat_label])

    # further chronological stages
    for i, span in enumerate(
        ["90/80 à 70/60 av. n.è.", "70/60 à 50/40 av. n.è.", "50/40 à 30/20 av. n.è.",
         "30/20 av. n.è. à 10/20 de n.è.", "10/20 à 40/50 de n.è."],
        start=2,
    ):
        b.add(f"Étape {i} céramique : {span}{SUFFIX}", LABEL_PERIODISATION,
              definition=f"Étape {i} de la périodisation céramique ({span}).")

    # decoy with the same stripped label as the documented form, outside the
    # referential branch: scoped label resolution must never reach it
    b.add("assiette (ROUX 1999)", "céramique période oppidum",
          definition="Forme assiette d'un autre référentiel.", sources=["Roux 1999"])

    store.referentials[REF_ID].role_counts = role_counts(store, REF_ID)
    return store


def fixture_turtle_path():
    """Path to the shipped Turtle fixture."""
    return resources.files("pivotheso").joinpath("data/bibracte.ttl")
