# lch_app/views.py
import logging

from django.http import JsonResponse, Http404
from django.shortcuts import get_object_or_404
from django.views.decorators.http import require_GET

from .models import Certificate, DiagramRecord
from .utils.corpus import list_corpus, load_diagram
from .utils.errors import LCHError
from .utils.lchdga import check_d_squared, differential

logger = logging.getLogger(__name__)


def error_payload(exc: LCHError) -> dict:
    return {'error': {'type': type(exc).__name__, 'message': str(exc)}}


@require_GET
def corpus_list(request):
    """
    Names of the bundled diagrams, with the stored records alongside
    """
    stored = {r.name: r for r in DiagramRecord.objects.all()}
    diagrams = []
    for name in list_corpus():
        record = stored.get(name)
        diagrams.append({
            'name': name,
            'stored': record is not None,
            'crossing_count': record.crossing_count if record else None,
        })
    return JsonResponse({'diagrams': diagrams})


@require_GET
def dga_detail(request, name):
    """
    The differential of a bundled diagram, computed on request
    """
    # Only corpus names; never arbitrary paths from the URL
    if name not in list_corpus():
        raise Http404(f"no diagram named {name}")
    try:
        g = differential(load_diagram(name))
    except LCHError as exc:
        logger.warning("dga view failed for %s: %s", name, exc)
        return JsonResponse(error_payload(exc), status=422)
    payload = g.as_dict()
    payload['d_squared'] = check_d_squared(g).as_dict()
    return JsonResponse(payload)


def certificate_summary(cert: Certificate) -> dict:
    return {
        'id': cert.id,
        'diagram': cert.diagram_name,
        'sublink': cert.get_sublink_list(),
        'rank': cert.rank,
        'complete': cert.complete,
        'verdict': cert.verdict,
        'transcript_sha256': cert.transcript_sha256,
        'created_at': cert.created_at.isoformat(),
    }


@require_GET
def certificate_list(request):
    certificates = Certificate.objects.all()
    diagram = request.GET.get('diagram')
    if diagram:
        certificates = certificates.filter(diagram_name=diagram)
    return JsonResponse({'certificates': [certificate_summary(c) for c in certificates]})


@require_GET
def certificate_detail(request, certificate_id):
    cert = get_object_or_404(Certificate, id=certificate_id)
    payload = certificate_summary(cert)
    payload['certificate'] = cert.get_certificate()
    return JsonResponse(payload)
