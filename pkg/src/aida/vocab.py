"""IRIs used in exported nanopublications.

The ``aida:`` terms form a small internal vocabulary. ``PUBLIC_MAPPING``
lists a substitution onto public ontologies that
:func:`aida.nanopub.substitute_vocabulary` can apply; it is optional, as
none of these relations has a single agreed-upon public term.
"""

DEFAULT_BASE_NAMESPACE = "http://example.org/aida"

AIDA = "http://example.org/aida/terms#"
NP = "http://www.nanopub.org/nschema#"
PROV = "http://www.w3.org/ns/prov#"
DCT = "http://purl.org/dc/terms/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
SCHEMA = "http://schema.org/"
XSD = "http://www.w3.org/2001/XMLSchema#"

PREFIXES = {
    "aida": AIDA,
    "dct": DCT,
    "np": NP,
    "prov": PROV,
    "rdf": RDF,
    "rdfs": RDFS,
    "schema": SCHEMA,
    "skos": SKOS,
    "xsd": XSD,
}

# internal vocabulary
STATEMENT_TEXT = AIDA + "statementText"
MENTIONS = AIDA + "mentions"
MORE_SPECIFIC_THAN = AIDA + "moreSpecificThan"
SAME_MEANING = AIDA + "sameMeaning"
FOLLOWS_FROM = AIDA + "followsFrom"
ATTRIBUTED_TO = AIDA + "attributedTo"
GENERATOR_NAME = AIDA + "generatorName"
GENERATOR_VERSION = AIDA + "generatorVersion"

# nanopublication schema and standard terms
RDF_TYPE = RDF + "type"
NANOPUBLICATION = NP + "Nanopublication"
HAS_ASSERTION = NP + "hasAssertion"
HAS_PROVENANCE = NP + "hasProvenance"
HAS_PUBLICATION_INFO = NP + "hasPublicationInfo"
WAS_GENERATED_BY = PROV + "wasGeneratedBy"
CREATED = DCT + "created"
XSD_DATETIME = XSD + "dateTime"

PUBLIC_MAPPING = {
    STATEMENT_TEXT: RDFS + "label",
    MENTIONS: SCHEMA + "mentions",
    MORE_SPECIFIC_THAN: SKOS + "broader",
    SAME_MEANING: SKOS + "exactMatch",
    FOLLOWS_FROM: PROV + "wasDerivedFrom",
    ATTRIBUTED_TO: PROV + "hadPrimarySource",
}
