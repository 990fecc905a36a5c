function t(t,n){var r=Object.create(null);t.forEach(function(t){var u=n(t);(r[u]||(r[u]=[])).push(t)});return r}function n(n){var r=t(n,function(t){return t.status});return Object.keys(r).sort().map(function(t){var n=r[t],u=0;for(var a=0;a<n.length;a++)u+=n[a].amount;return{status:t,count:n.length,total:u,mean:u/n.length}})}
