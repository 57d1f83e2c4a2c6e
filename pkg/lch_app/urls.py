# lch_app/urls.py
from django.urls import path
from . import views

urlpatterns = [
    # Bundled diagrams
    path('api/corpus/', views.corpus_list, name='corpus_list'),
    path('api/dga/<str:name>/', views.dga_detail, name='dga_detail'),

    # Stored certificates
    path('api/certificates/', views.certificate_list, name='certificate_list'),
    path('api/certificates/<int:certificate_id>/', views.certificate_detail, name='certificate_detail'),
]
