function e(e,n){const t=new Set;const r=new Set;const o=[];function c(e){if(t.has(e))return;if(r.has(e))throw new Error("cycle at "+e);r.add(e);for(const t of n(e))c(t);r.delete(e);t.add(e);o.push(e)}e.forEach(c);return o.reverse()}
